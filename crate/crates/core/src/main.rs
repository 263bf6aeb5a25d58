use std::io::Write;

fn main() {
    let (code, out) = hopf_comod::cli::run(std::env::args_os());
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = lock.write_all(out.as_bytes());
    let _ = lock.flush();
    std::process::exit(code);
}
