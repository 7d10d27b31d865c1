fn main() {
    let code = ftlabels::cli_io::run_cli(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
