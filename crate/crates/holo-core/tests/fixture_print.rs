//! One-off generator for the committed CLI fixtures; run manually with
//! `cargo test -p holo-core --test fixture_print -- --ignored --nocapture`.

#[allow(dead_code)]
mod common;

use holo_core::collapse::CollapseInstance;
use holo_core::doppler;
use holo_core::formats;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
#[ignore]
fn print_fixture_files() {
    println!("==== prism.graph ====");
    print!("{}", formats::write_graph(&doppler::triangular_prism()));
    println!("==== cube.graph ====");
    print!("{}", formats::write_graph(&doppler::cube_graph()));
    println!("==== theta.graph ====");
    print!("{}", formats::write_graph(&doppler::theta_multigraph()));

    let mut rng = ChaCha8Rng::seed_from_u64(7777);
    let CollapseInstance { basis, generators, recognizers, .. } =
        common::domain2_instance(&mut rng, 2, 2);
    println!("==== m.basis ====");
    print!("{}", formats::write_basis(&basis));
    println!("==== g.sig ====");
    print!("{}", formats::write_signature(&generators[0].0));
    println!("==== underg.sig ====");
    print!("{}", formats::write_signature(&generators[0].1));
    println!("==== r.sig ====");
    print!("{}", formats::write_signature(&recognizers[0].0));
    println!("==== underr.sig ====");
    print!("{}", formats::write_signature(&recognizers[0].1));

    let mut rng = ChaCha8Rng::seed_from_u64(8888);
    let CollapseInstance { basis, generators, recognizers, .. } =
        common::domain4_instance(&mut rng);
    println!("==== m4.basis ====");
    print!("{}", formats::write_basis(&basis));
    println!("==== g4.sig ====");
    print!("{}", formats::write_signature(&generators[0].0));
    println!("==== underg4.sig ====");
    print!("{}", formats::write_signature(&generators[0].1));
    println!("==== r4.sig ====");
    print!("{}", formats::write_signature(&recognizers[0].0));
    println!("==== underr4.sig ====");
    print!("{}", formats::write_signature(&recognizers[0].1));
}
