use detblow_core::blowup::{assemble_ideal, en_betti_table, BlowupMode};
use detblow_core::bminimal::{genus_minimal, BMinimalProfile};
use detblow_core::field::PrimeField;
use detblow_core::graded::{betti_to_hilbert, monomial_count};
use detblow_core::hilburch::{analyze, sample_nondegenerate, DegreeMatrix};

/// Degree matrices of the worked examples with their ambient dimension.
const GOLDEN: &[(&str, usize)] = &[
    ("2,2,2;1,1,1", 3),
    ("1,1,1,1;1,1,1,1;1,1,1,1", 3),
    ("1,2,2;1,2,2", 3),
    ("1,1,1,2;1,1,1,2;1,1,1,2", 3),
    ("1,1,1,1,1;1,1,1,1,1;1,1,1,1,1;1,1,1,1,1", 3),
    ("2,2,2,2;1,1,1,1;1,1,1,1", 4),
    ("2,2,2;2,2,2", 4),
    ("2,2,2,2,2;1,1,1,1,1;1,1,1,1,1;1,1,1,1,1", 5),
    ("2,2,2,2;2,2,2,2;1,1,1,1", 5),
];

#[test]
fn resolution_predicts_every_ideal_piece() {
    let f = PrimeField::default();
    for &(rows, n) in GOLDEN {
        let dm = DegreeMatrix::parse(rows).unwrap();
        let hb = sample_nondegenerate(f, &dm, n, 11, 5).unwrap();
        let ideal = hb.ideal().unwrap();
        let table = dm.betti_table();
        for t in 0..=9u32 {
            let predicted = monomial_count(n + 1, t) as i64 - betti_to_hilbert(&table, n + 1, t as i64);
            assert_eq!(ideal.ideal_piece_dimension(t).unwrap() as i64, predicted, "{rows} at t = {t}");
        }
    }
}

#[test]
fn eagon_northcott_predicts_the_blown_up_ideal() {
    let f = PrimeField::default();
    for (n, sigma) in [(3usize, 4usize), (3, 5), (4, 6)] {
        let dm = DegreeMatrix::new(vec![vec![1; sigma + 1]; sigma]).unwrap();
        let hb = sample_nondegenerate(f, &dm, n, 5, 5).unwrap();
        let pres = assemble_ideal(&hb, BlowupMode::Sigma).unwrap();
        let ideal = pres.ideal().unwrap();
        let table = en_betti_table(n, sigma).unwrap();
        let nv = pres.psi.nvars();
        for t in 0..=10u32 {
            let predicted = monomial_count(nv, t) as i64 - betti_to_hilbert(&table, nv, t as i64);
            assert_eq!(ideal.ideal_piece_dimension(t).unwrap() as i64, predicted, "(n, sigma) = ({n}, {sigma}), t = {t}");
        }
    }
}

#[test]
fn minimal_genus_agrees_with_the_template_resolution() {
    for s in 3..=30 {
        let p = BMinimalProfile::from_degree(s).unwrap();
        assert_eq!(genus_minimal(s) as i64, p.genus_from_twists(), "s = {s}");
    }
}

#[test]
fn minimal_genus_agrees_with_a_plane_section() {
    let f = PrimeField::default();
    for s in 3..=12 {
        let p = BMinimalProfile::from_degree(s).unwrap();
        let hb = sample_nondegenerate(f, &p.degree_matrix(), 3, s, 5).unwrap();
        let (degree, genus) = hb.plane_section_genus(s + 100, 16).unwrap();
        assert_eq!(degree, s);
        assert_eq!(genus, genus_minimal(s) as i64, "s = {s}");
    }
}

#[test]
fn linear_curves_follow_the_binomial_law() {
    let f = PrimeField::default();
    let choose = |a: i64, b: i64| -> i64 { (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1)) };
    for sigma in 2..=5usize {
        let dm = DegreeMatrix::new(vec![vec![1; sigma + 1]; sigma]).unwrap();
        let hb = sample_nondegenerate(f, &dm, 3, 2, 5).unwrap();
        let report = analyze(&hb, None).unwrap();
        let s = sigma as i64;
        let degree = choose(s + 1, 2);
        assert_eq!(report.degree as i64, degree);
        assert_eq!(report.genus, Some(2 * choose(s + 1, 3) - degree + 1));
    }
}
