fn main() {
    let env = asmtree_cli::Env::from_process();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = asmtree_cli::run(std::env::args_os(), &env, &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
