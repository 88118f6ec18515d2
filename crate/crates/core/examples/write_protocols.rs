//! Regenerate the shipped protocol files under `protocols/`.
use qcc_lab::protocol::fixtures;
use qcc_lab::reductions::and_distribution;

fn main() -> std::io::Result<()> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("protocols");
    std::fs::create_dir_all(&dir)?;
    let files = [
        ("and2.proto", fixtures::and2()),
        ("disj1_n2.proto", fixtures::disj(2, 1)),
        ("disj2_n2.proto", fixtures::disj(2, 2)),
        ("disj1_n3.proto", fixtures::disj(3, 1)),
        ("disj2_n3.proto", fixtures::disj(3, 2)),
        ("paradox.proto", fixtures::paradox()),
        ("promise3_n2.proto", fixtures::promise3(2)),
        ("noisy_and.proto", fixtures::noisy_and(0.6)),
        ("zero_round.proto", fixtures::zero_round()),
    ];
    for (name, p) in files {
        std::fs::write(dir.join(name), p.to_json())?;
        println!("wrote protocols/{name}");
    }
    std::fs::write(dir.join("and.dist"), and_distribution().to_json())?;
    println!("wrote protocols/and.dist");
    Ok(())
}
