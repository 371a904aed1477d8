use heckelab::*;
fn main() {
    let t0 = std::time::Instant::now();
    let h = hecke::Hecke::new(coxeter::CoxeterSystem::from_type("A2").unwrap()).unwrap();
    let kl = h.kl_basis();
    let cells = cells::compute_cells(&h, &kl);
    let dual = schur::dual_standard_basis(&h, &kl);
    let (_, n) = schur::shifted_heights(&cells).unwrap();
    let coll = schur::qschur_collection(&h, &cells).unwrap();
    let endo = schur::build_endo_integral(&h, &coll).unwrap();
    let filts: Vec<_> = coll.summands.iter().map(|s| schur::height_filtration(&h, &cells, &dual, s.lam.as_ref().unwrap(), n).unwrap()).collect();
    let chain = schur::ideal_chain_integral(&h, &endo, &coll, &filts, n).unwrap();
    println!("chain dims: {:?}  [{:?}]", chain.iter().map(|c| c.len()).collect::<Vec<_>>(), t0.elapsed());
    let objs = decomp::build_standard_objects(&endo, &chain, &cells).unwrap();
    for l in &objs.labels {
        println!("label: level {} height {} cell {:?} mult {} dim {}", l.level, l.height, l.cell, l.mult, l.dim_generic);
    }
    println!("standard objects built [{:?}]", t0.elapsed());
    let fld = spots::ResidueField::new(spots::parse_spot("max=2,t+1").unwrap()).unwrap();
    let b = endo.specialize(&fld);
    let set = decomp::simples_finite_field(&fld, &b, 7).unwrap();
    println!("simples: {:?} [{:?}]", set.simples.iter().map(|d| d.dim).collect::<Vec<_>>(), t0.elapsed());
    let (dm, standards) = decomp::decomposition_matrix(&fld, &endo, &objs, &set, true).unwrap();
    println!("matrix: {:?} heights {:?} [{:?}]", dm.entries, dm.heights, t0.elapsed());
    let rep = decomp::verify_triangularity(&fld, &dm, &set, &standards);
    println!("triangular pass={} witnesses={:?} [{:?}]", rep.pass, rep.witnesses, t0.elapsed());
    let rad = radical::radical(&fld, &b);
    for (row, e) in dm.entries.iter().zip(&standards) {
        let slow = decomp::series_multiplicities(&fld, &set, e, &rad, 13).unwrap();
        assert_eq!(row, &slow);
    }
    println!("oracle agrees [{:?}]", t0.elapsed());
}
