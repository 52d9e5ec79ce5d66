fn main() {
    let code = itl::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
