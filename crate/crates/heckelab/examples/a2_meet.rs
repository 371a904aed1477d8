use heckelab::*;
fn main() {
    let h = hecke::Hecke::new(coxeter::CoxeterSystem::from_type("A2").unwrap()).unwrap();
    let kl = h.kl_basis();
    let cells = cells::compute_cells(&h, &kl);
    let dual = schur::dual_standard_basis(&h, &kl);
    let (heights, _) = schur::shifted_heights(&cells).unwrap();
    let eh = schur::element_heights(&cells, &heights, h.order());
    println!("element heights: {:?}", eh);
    let lam = [0u8];
    let reps = h.sys.min_coset_reps(&lam).unwrap();
    let xl = hmodules::x_lambda(&h, &lam);
    let emb: Vec<Vec<laurent::IntLaurent>> = reps.iter().map(|d| {
        let mut acc = xl.clone();
        for &s in d.word() { acc = h.right_mul_gen(&acc, s); }
        (0..h.order()).map(|w| acc.coeff(w)).collect()
    }).collect();
    let coords = match zlinalg::lattice_coords(&dual, &emb) {
        zlinalg::ZOutcome::Done(Some(c)) => c,
        o => panic!("dual coords: {:?}", o),
    };
    for (i, c) in coords.iter().enumerate() {
        println!("basis {i} dual coords: {:?}", c);
    }
    for j in 1..=3usize {
        let high: Vec<usize> = (0..h.order()).filter(|&x| eh[x] > j).collect();
        let cons: Vec<Vec<laurent::IntLaurent>> = high.iter()
            .map(|&x| coords.iter().map(|c| c[x].clone()).collect()).collect();
        println!("j={j} constraints:");
        for r in &cons { println!("  {:?}", r); }
        match zlinalg::z_kernel(&cons) {
            zlinalg::ZOutcome::Done(k) => println!("  kernel rank {}", k.len()),
            zlinalg::ZOutcome::Unknown => println!("  kernel UNKNOWN"),
        }
    }
}
