//! Writes a basis, a protocol and its decomposition to JSON and reads them
//! back unchanged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superdense::bases::clock_shift_basis;
use superdense::io;
use superdense::protocol::random_scrambled_bw;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("superdense-example");
    std::fs::create_dir_all(&dir)?;

    let b = clock_shift_basis(3)?;
    io::save_basis(&dir.join("basis.json"), &b)?;
    assert_eq!(io::load_basis(&dir.join("basis.json"))?, b);

    let (p, dec) = random_scrambled_bw(&mut ChaCha8Rng::seed_from_u64(1), 2, 2, 2)?;
    io::save_protocol(&dir.join("protocol.json"), &p)?;
    io::save_decomposition(&dir.join("decomposition.json"), &dec)?;
    assert_eq!(io::load_protocol(&dir.join("protocol.json"))?, p);
    assert_eq!(io::load_decomposition(&dir.join("decomposition.json"))?, dec);

    println!("wrote and reloaded {}", dir.display());
    println!("{}...", &io::basis_to_json(&b)[..80]);
    Ok(())
}
