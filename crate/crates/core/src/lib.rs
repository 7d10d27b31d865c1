pub mod cli_io;
pub mod decomposition;
pub mod ft_labels;
pub mod generators;
pub mod nonfaulty_labels;
pub mod planar_core;
pub mod query_engine;
pub mod reduction;
pub mod secondary_path_labels;
pub mod verification;
