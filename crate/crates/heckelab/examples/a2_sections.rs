use heckelab::*;
fn main() {
    let h = hecke::Hecke::new(coxeter::CoxeterSystem::from_type("A2").unwrap()).unwrap();
    let kl = h.kl_basis();
    let cells = cells::compute_cells(&h, &kl);
    let dual = schur::dual_standard_basis(&h, &kl);
    let (heights, n) = schur::shifted_heights(&cells).unwrap();
    println!("two-sided cells: {:?}", cells.two_sided_cells);
    println!("cell heights: {:?}  n={}", heights, n);
    let coll = schur::qschur_collection(&h, &cells).unwrap();
    for s in &coll.summands {
        let lam = s.lam.as_ref().unwrap();
        let f = schur::height_filtration(&h, &cells, &dual, lam, n).unwrap();
        println!("lam {:?}: section ranks {:?}", lam, f.section_ranks());
        let id = schur::identify_sections_generic(&h, &kl, &cells, lam, &f).unwrap();
        println!("  sections: {:?}", id);
    }
}
