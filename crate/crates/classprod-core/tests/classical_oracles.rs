//! Medium-size cross-checks of the classical constructions against known
//! class sizes, centralizer orders, and centralizer orbit partitions.

use classprod_core::classes::enumerate_class;
use classprod_core::classical::{
    orbit_lengths_projective, Action, ClassicalGroup, Family, GroupSpec,
};
use classprod_core::elements::{
    gl_centralizer_element, orthogonal_transvection, rank_k_eichler_product,
    rank_k_siegel_product, reflection,
};
use classprod_core::{bsgs, Perm};

fn build(family: Family, n: usize, q: u8, action: Action) -> ClassicalGroup {
    ClassicalGroup::build(GroupSpec::new(family, n, q, action), 1).unwrap()
}

#[test]
fn go8_2_class_sizes() {
    let g = build(Family::GOPlus, 8, 2, Action::VectorsNonzero);
    assert_eq!(g.order(), 348_364_800);
    let form = g.form.as_ref().unwrap();

    let a2 = g.perm_of(&rank_k_eichler_product(form, 2).unwrap()).unwrap();
    let c2 = enumerate_class(&g.group, &a2, 100_000, 1).unwrap();
    assert_eq!(c2.size(), 1575);

    let a4 = g.perm_of(&rank_k_eichler_product(form, 4).unwrap()).unwrap();
    let c4 = enumerate_class(&g.group, &a4, 100_000, 1).unwrap();
    assert_eq!(c4.size(), 7560);

    let mut v = vec![0u8; 8];
    v[0] = 1;
    v[7] = 1;
    let t = g
        .perm_of(&orthogonal_transvection(form, &v).unwrap())
        .unwrap();
    let ct = enumerate_class(&g.group, &t, 10_000, 1).unwrap();
    assert_eq!(ct.size(), 120);
}

#[test]
fn s8_handle_transposition_orbits() {
    // S8 realized as the duality extension of SL4(2) on 15 points + 15
    // hyperplanes; the graph involution class matches the transpositions
    let g = build(Family::SLDualExt, 4, 2, Action::VectorsPlusCovectors);
    assert_eq!(g.order(), 40320);
    let r = g.outer_rep.clone().unwrap();
    let cr = enumerate_class(&g.group, &r, 10_000, 1).unwrap();
    assert_eq!(cr.size(), 28);

    let mut t_mat = classprod_core::Mat::identity(2, 4);
    t_mat.set(0, 1, 1);
    let t = g.perm_of(&t_mat).unwrap();
    let ct = enumerate_class(&g.group, &t, 10_000, 1).unwrap();
    assert_eq!(ct.size(), 105);
    // C(transvection) splits the transpositions into two orbits: 4 + 24
    assert_eq!(ct.centralizer_orbits_on(&g.group, &cr).unwrap(), vec![4, 24]);
}

#[test]
fn pgl2_7_handle_order() {
    let g = build(Family::SLDualExt, 3, 2, Action::VectorsPlusCovectors);
    assert_eq!(g.order(), 336);
}

#[test]
fn prop_6_1_centralizer_orbits_char_2() {
    // long root element in GO+(2m, 2): orbits of its centralizer on the
    // nonsingular vectors
    for (n, expected) in [(4usize, vec![6usize]), (6, vec![4, 24])] {
        let g = build(Family::GOPlus, n, 2, Action::VectorsNonzero);
        let form = g.form.as_ref().unwrap();
        let x = g.perm_of(&rank_k_eichler_product(form, 2).unwrap()).unwrap();
        let c = enumerate_class(&g.group, &x, 100_000, 1).unwrap();
        let nonsingular: Vec<u16> = g
            .table
            .vectors
            .iter()
            .enumerate()
            .filter(|(_, v)| form.q_value(v) != 0)
            .map(|(i, _)| i as u16)
            .collect();
        let mut lens =
            bsgs::orbit_lengths_on_set(c.centralizer.generators(), &nonsingular).unwrap();
        lens.sort_unstable();
        assert_eq!(lens, expected, "GO+({n},2)");
    }
}

#[test]
fn prop_6_1_centralizer_orbits_odd() {
    // Same statement over GF(3), on nondegenerate 1-spaces. The orbit lengths
    // q^2(q-1) and q^3(q^2-1) hold for the centralizer in the conformal group
    // CO = <GO, similitude>; inside GO(q) itself each orbit splits in two
    // (the two norm classes of lines are GO-invariant but fused by a
    // multiplier-2 similitude).
    for (n, go_vec_expected, co_line_expected) in [
        (4usize, vec![24usize, 24], vec![24usize]),
        (6, vec![18, 18, 216, 216], vec![18, 216]),
    ] {
        let g = build(Family::GOPlus, n, 3, Action::VectorsNonzero);
        let form = g.form.as_ref().unwrap();
        let x = g.perm_of(&rank_k_eichler_product(form, 2).unwrap()).unwrap();
        let c = enumerate_class(&g.group, &x, 1_000_000, 1).unwrap();
        let nonsingular: Vec<u16> = g
            .table
            .vectors
            .iter()
            .enumerate()
            .filter(|(_, v)| form.q_value(v) != 0)
            .map(|(i, _)| i as u16)
            .collect();
        let mut lens =
            bsgs::orbit_lengths_on_set(c.centralizer.generators(), &nonsingular).unwrap();
        lens.sort_unstable();
        assert_eq!(lens, go_vec_expected, "GO+({n},3) vectors");

        let co = g.conformal_extension(1).unwrap();
        assert_eq!(co.order(), 2 * g.group.order());
        let cc = enumerate_class(&co, &x, 1_000_000, 1).unwrap();
        let proj = g.table.one_space_projection();
        let mut reps: Vec<u32> = nonsingular.iter().map(|&i| proj[i as usize]).collect();
        reps.sort_unstable();
        reps.dedup();
        let lines = orbit_lengths_projective(cc.centralizer.generators(), &proj, &reps);
        assert_eq!(lines, co_line_expected, "CO+({n},3) lines");
    }
}

#[test]
fn prop_6_7_symplectic_orbits() {
    for (n, expected) in [(4usize, vec![3usize, 12]), (6, vec![3, 12, 48])] {
        let g = build(Family::Sp, n, 2, Action::VectorsNonzero);
        let form = g.form.as_ref().unwrap();
        let x = g.perm_of(&rank_k_siegel_product(form, 2).unwrap()).unwrap();
        let c = enumerate_class(&g.group, &x, 100_000, 1).unwrap();
        let all: Vec<u16> = (0..g.table.degree as u16).collect();
        let mut lens = bsgs::orbit_lengths_on_set(c.centralizer.generators(), &all).unwrap();
        lens.sort_unstable();
        assert_eq!(lens, expected, "Sp({n},2)");
    }
}

#[test]
fn prop_6_8_so5_3_orbits() {
    let g = build(Family::SOOdd, 5, 3, Action::PointsProjective);
    let form = g.form.as_ref().unwrap();
    let x = g.perm_of(&rank_k_eichler_product(form, 2).unwrap()).unwrap();
    let c = enumerate_class(&g.group, &x, 10_000, 1).unwrap();
    assert_eq!(c.size(), 80);
    let nondeg: Vec<u16> = g
        .table
        .vectors
        .iter()
        .enumerate()
        .filter(|(_, v)| form.q_value(v) != 0)
        .map(|(i, _)| i as u16)
        .collect();
    assert_eq!(nondeg.len(), 81);
    let mut lens = bsgs::orbit_lengths_on_set(c.centralizer.generators(), &nondeg).unwrap();
    lens.sort_unstable();
    assert_eq!(lens, vec![9, 36, 36]);
    // per norm class (the two square classes of line discriminants) the
    // count stays within the bound as well
    for norm in [1u8, 2] {
        let part: Vec<u16> = g
            .table
            .vectors
            .iter()
            .enumerate()
            .filter(|(_, v)| form.q_value(v) == norm)
            .map(|(i, _)| i as u16)
            .collect();
        let lens = bsgs::orbit_lengths_on_set(c.centralizer.generators(), &part).unwrap();
        assert!(lens.len() <= 3, "norm {norm}: {lens:?}");
    }
}

#[test]
fn ex_4_1_pgl4_3_orbit_single() {
    // PGL4(3).2: x the image of a pseudoreflection, y the graph involution
    // whose centralizer is symplectic; C(x) is transitive on y's class
    let g = build(Family::SLDualExt, 4, 3, Action::VectorsPlusCovectors);
    assert_eq!(g.order(), 24_261_120);
    let x_mat = classprod_core::elements::pseudoreflection(3, 4, 2);
    let x = g.perm_of(&x_mat).unwrap();
    let cx = enumerate_class(&g.group, &x, 10_000, 1).unwrap();
    assert_eq!(cx.size(), 1080);
    let y = g.outer_rep.clone().unwrap();
    let cy = enumerate_class(&g.group, &y, 10_000, 1).unwrap();
    assert_eq!(cy.size(), 234);
    assert_eq!(cx.centralizer_orbits_on(&g.group, &cy).unwrap(), vec![234]);
}

#[test]
fn small_group_brute_force_equivalence() {
    // every class size and centralizer from the key-BFS machinery agrees
    // with explicit closure on groups small enough to enumerate
    let cases = [
        (Family::SL, 2, 3, 24u128),
        (Family::SL, 3, 2, 168),
        (Family::Sp, 4, 2, 720),
        (Family::GOPlus, 4, 2, 72),
        (Family::GOMinus, 4, 2, 120),
        (Family::GOPlus, 4, 3, 1152),
    ];
    for (family, n, q, order) in cases {
        let g = build(family, n, q, Action::VectorsNonzero);
        assert_eq!(g.order(), order);
        let brute =
            classprod_core::classes::all_classes_brute(g.group.generators(), 6000).unwrap();
        let total: usize = brute.iter().map(|(_, s)| s).sum();
        assert_eq!(total as u128, order);
        for (rep, size) in &brute {
            let c = enumerate_class(&g.group, rep, 6000, 1).unwrap();
            assert_eq!(c.size(), *size);
            assert_eq!(c.centralizer_order() * *size as u128, order);
        }
    }
}

#[test]
fn wreath_sl2_3_outer_class_products() {
    // SL2(3) wr 2: diagonal unipotent class times the swap class meets
    // exactly two classes (matching the SL2(3)-classes of products a*b)
    let g = build(Family::WreathSL2, 4, 3, Action::VectorsNonzero);
    assert_eq!(g.order(), 1152);
    let gens = g.group.generators().to_vec();
    let form_p = 3u8;
    let _ = form_p;
    // diagonal unipotent (u, u) and the block swap
    let mut u2 = classprod_core::Mat::identity(3, 4);
    u2.set(0, 1, 1);
    u2.set(2, 3, 1);
    let swap = classprod_core::classical::block_swap(3);
    let pu = g.perm_of(&u2).unwrap();
    let ps = g.perm_of(&swap).unwrap();
    let cu = enumerate_class(&g.group, &pu, 10_000, 1).unwrap();
    let cs = enumerate_class(&g.group, &ps, 10_000, 1).unwrap();
    let xs: Vec<Perm> = (0..cu.size())
        .map(|i| cu.element_at(&g.group, i).unwrap())
        .collect();
    let ys: Vec<Perm> = (0..cs.size())
        .map(|i| cs.element_at(&g.group, i).unwrap())
        .collect();
    let prods = classprod_core::classes::product_set(&xs, &ys, 1_000_000).unwrap();
    let classes = classprod_core::classes::decompose_into_classes(&gens, &prods);
    assert_eq!(classes.len(), 2);
}

#[test]
fn gl_centralizer_element_class_in_go8_3_is_well_defined() {
    // cheap sanity ahead of the big Ex 4.2 run: the order-4 element lies in
    // GO+8(3) and powers to the central -1
    let g = build(Family::GOPlus, 8, 3, Action::VectorsNonzero);
    let form = g.form.as_ref().unwrap();
    let x = gl_centralizer_element(form).unwrap();
    let px = g.perm_of(&x).unwrap();
    assert!(g.group.contains(&px));
    assert_eq!(px.order(), 4);
    // reflections exist at nondegenerate vectors
    let v = vec![1u8, 0, 0, 0, 0, 0, 0, 1];
    let y = reflection(form, &v).unwrap();
    assert!(g.group.contains(&g.perm_of(&y).unwrap()));
}
