use std::process::ExitCode;

fn main() -> ExitCode {
    // Die quietly when a pipe reader such as `head` closes stdout instead
    // of panicking mid-print; Rust ignores SIGPIPE by default.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    ExitCode::from(depref_harness::cli::run() as u8)
}
