use std::io::Write;

fn main() {
    let done = qfpt_cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(done.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(done.exit_code);
}
