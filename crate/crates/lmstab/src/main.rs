fn main() {
    std::process::exit(lmstab::cli::run());
}
