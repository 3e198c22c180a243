use semimatch::band::{all_regular_bands, builtin_b7};
use semimatch::corpus::corpus;
use semimatch::oracle::green_naive;
use semimatch::semigroup::{h_quotient, principal_factors, structure_report, FiniteSemigroup};
use semimatch::transform::{enumerate, Family, DEFAULT_CAP};

fn sample() -> Vec<FiniteSemigroup> {
    let mut out: Vec<FiniteSemigroup> = corpus(200, 1000, 12).into_iter().map(|e| e.semigroup).collect();
    out.extend(all_regular_bands(2, 3).map(|b| b.to_semigroup()));
    out.push(enumerate(Family::Tn, 3, DEFAULT_CAP).unwrap().semigroup);
    out.push(enumerate(Family::On, 3, DEFAULT_CAP).unwrap().semigroup);
    out
}

#[test]
fn green_relations_match_ideal_comparison() {
    for s in sample() {
        let eb = s.green_relations();
        let (r, l, d) = green_naive(&s);
        for a in s.elements() {
            for b in s.elements() {
                assert_eq!(eb.r_class(a) == eb.r_class(b), r[a][b]);
                assert_eq!(eb.l_class(a) == eb.l_class(b), l[a][b]);
                assert_eq!(eb.d_class(a) == eb.d_class(b), d[a][b]);
                assert_eq!(eb.h_related(a, b), r[a][b] && l[a][b]);
            }
        }
    }
}

#[test]
fn group_cells_hold_one_idempotent() {
    for s in sample() {
        let eb = s.green_relations();
        for class in eb.d_classes() {
            for (row, cells) in class.cells.iter().enumerate() {
                for (col, cell) in cells.iter().enumerate() {
                    let idempotents = cell.iter().filter(|&&a| s.is_idempotent(a)).count();
                    assert_eq!(idempotents, usize::from(class.group[row][col]));
                }
            }
        }
    }
}

#[test]
fn factors_partition_the_semigroup() {
    for s in sample() {
        let factors = principal_factors(&s).unwrap();
        let eb = s.green_relations();
        let total: usize = factors.iter().map(|f| f.nonzero().len()).sum();
        assert_eq!(total, s.order());
        for f in &factors {
            f.semigroup.validate().unwrap();
            let q = h_quotient(f).unwrap();
            let class = &eb.d_classes()[f.source_d_class];
            assert_eq!((q.rows(), q.cols()), (class.rows(), class.cols()));
        }
    }
}

#[test]
fn full_transformation_monoid_on_three_points() {
    let t3 = enumerate(Family::Tn, 3, DEFAULT_CAP).unwrap();
    let mut sizes: Vec<usize> = t3.semigroup.green_relations().d_classes().iter().map(|d| d.elements.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![3, 6, 18]);
    // identity map: its only inverse is itself
    let id = t3.index_of(&semimatch::transform::Transformation::new(vec![0, 1, 2])).unwrap();
    assert_eq!(t3.semigroup.inverses_of(id), vec![id]);
    let report = structure_report(&t3.semigroup);
    assert!(report.regular && !report.inverse && !report.orthodox);
}

#[test]
fn order_preserving_monoids_are_regular() {
    for n in 1..=4 {
        assert!(enumerate(Family::On, n, DEFAULT_CAP).unwrap().semigroup.is_regular());
    }
}

#[test]
fn partial_maps_include_the_empty_map() {
    let pt2 = enumerate(Family::PTn, 2, DEFAULT_CAP).unwrap();
    let empty = semimatch::transform::Transformation::new(vec![u8::MAX, u8::MAX]);
    let z = pt2.index_of(&empty).unwrap();
    assert!(pt2.semigroup.elements().all(|a| pt2.semigroup.mul(a, z) == z && pt2.semigroup.mul(z, a) == z));
}

#[test]
fn b7_structure() {
    let s = builtin_b7().to_semigroup();
    let r = structure_report(&s);
    assert_eq!(r.order, 7);
    assert!(r.orthodox && !r.inverse && r.regular);
    // orthodoxy by direct product scan over E ∪ {0}
    let e = s.idempotents();
    assert!(e.iter().all(|&x| e.iter().all(|&y| s.is_idempotent(s.mul(x, y)))));
}
