use heckelab::cells;
use heckelab::coxeter::CoxeterSystem;
use heckelab::hecke::Hecke;
use heckelab::linalg;
use heckelab::modrep::{self, AlgMod};
use heckelab::radical;
use heckelab::schur::{self, build_endo_integral, dual_standard_basis, height_filtration,
    ideal_chain_integral, qschur_collection, shifted_heights, Filtration};
use heckelab::spots::{parse_spot, ResidueField};
use heckelab::stratcheck;

fn main() {
    let h = Hecke::new(CoxeterSystem::from_type(&std::env::args().nth(1).unwrap_or("A1".into())).unwrap()).unwrap();
    let kl = h.kl_basis();
    let cd = cells::compute_cells(&h, &kl);
    let dual = dual_standard_basis(&h, &kl);
    let (_, n) = shifted_heights(&cd).unwrap();
    let coll = qschur_collection(&h, &cd).unwrap();
    let endo = build_endo_integral(&h, &coll).unwrap();
    let filts: Vec<Filtration> = coll.summands.iter()
        .map(|s| height_filtration(&h, &cd, &dual, s.lam.as_ref().unwrap(), n).unwrap())
        .collect();
    let chain = ideal_chain_integral(&h, &endo, &coll, &filts, n).unwrap();
    println!("chain dims: {:?}", chain.iter().map(|c| c.len()).collect::<Vec<_>>());
    let fld = ResidueField::new(parse_spot("max=2,t+1").unwrap()).unwrap();
    let alg = endo.specialize(&fld);
    println!("alg dim {}", alg.dim);
    let rad = radical::radical(&fld, &alg);
    println!("radical dim {}", rad.len());
    for i in 1..chain.len() {
        let lower = schur::specialize_span(&fld, &chain[i - 1]);
        let upper = schur::specialize_span(&fld, &chain[i]);
        println!("step {i}: lower rank {} upper rank {} integral {}",
            linalg::rank(&fld, &lower), linalg::rank(&fld, &upper), chain[i].len());
        let (span, q) = if lower.is_empty() {
            (linalg::row_basis(&fld, &upper), alg.clone())
        } else {
            let (q, proj) = alg.quotient(&fld, &lower);
            let image: Vec<Vec<_>> = upper.iter().map(|v| linalg::mat_vec(&fld, &proj, v)).collect();
            (linalg::row_basis(&fld, &image), q)
        };
        let v = stratcheck::check_heredity_field(&fld, &q, &span, stratcheck::HeredityMode::Split, 7).unwrap();
        println!("  idem {} proj {:?} endo_ss {} mode {:?} overall {:?}",
            v.idempotent, v.projective, v.endo_semisimple, v.mode_verdict, v.overall);
        // detail: J as left module, its endo ring dims
        let reg = AlgMod::regular(&fld, &q);
        let jmod = modrep::submodule(&fld, &reg, &span).unwrap();
        let (e, _) = stratcheck::endo_algebra(&fld, &jmod).unwrap();
        println!("  J dim {} End(J) dim {} End rad {}", jmod.dim, e.dim,
            radical::radical(&fld, &e).len());
    }
}
