use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = kripke_toric::cli::Cli::parse();
    kripke_toric::cli::run(&cli)
}
