fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = qfa::cli::run_command(&args, &mut stdout, &mut stderr);
    std::process::exit(code);
}
