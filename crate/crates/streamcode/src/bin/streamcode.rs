fn main() {
    // Die quietly on a closed pipe (`streamcode ... | head`) instead of
    // panicking: restore the default SIGPIPE disposition Rust masks.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(streamcode::cli::run());
}
