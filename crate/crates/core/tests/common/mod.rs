#![allow(dead_code)]

use eii::{code_from_capability, CapabilityTree, Code, CodeSpec, Field};

pub fn gf(w: u32) -> &'static Field {
    Field::get(w).unwrap()
}

pub fn leaves(n: usize, us: &[usize]) -> Vec<Code> {
    us.iter().map(|&u| Code::leaf(n, u)).collect()
}

pub fn node(s: &[usize], children: &[Code]) -> Code {
    Code::node(s.to_vec(), children.to_vec())
}

pub fn spec8(code: Code) -> CodeSpec {
    CodeSpec::new(gf(3), code).unwrap()
}

pub fn from_capability(cap: &str, n: usize) -> CodeSpec {
    let tree: CapabilityTree = cap.parse().unwrap();
    CodeSpec::in_smallest_field(code_from_capability(&tree, n).unwrap()).unwrap()
}

/// The 4-level code over GF(8) with RS children of redundancy 1, 2, 4, 5.
pub fn worked_example() -> CodeSpec {
    spec8(node(&[2, 1, 1, 2, 1], &leaves(7, &[1, 2, 4, 5])))
}

pub struct Family {
    pub c2_0: Code,
    pub c2_1: Code,
}

/// Two nested 2-layer codes over RS children of redundancy 1, 2, 3.
pub fn family_123() -> Family {
    let l = leaves(7, &[1, 2, 3]);
    Family {
        c2_0: node(&[2, 1, 0, 0], &l),
        c2_1: node(&[1, 1, 1, 0], &l),
    }
}

pub fn three_level_chain() -> (Vec<Code>, Vec<Code>) {
    let l = leaves(7, &[1, 2, 3]);
    let c2 = vec![
        node(&[4, 1, 0, 0], &l),
        node(&[3, 2, 0, 0], &l),
        node(&[3, 1, 1, 0], &l),
    ];
    let c3 = vec![
        node(&[2, 2, 0, 0], &c2),
        node(&[2, 1, 1, 0], &c2),
        node(&[1, 2, 1, 0], &c2),
    ];
    (c2, c3)
}

/// Every example code with a name.
pub fn example_codes() -> Vec<(String, CodeSpec)> {
    let mut out = vec![("worked-4-level".to_string(), worked_example())];

    let l12 = leaves(7, &[1, 2]);
    let a0 = node(&[5, 1, 0], &l12);
    let a1 = node(&[4, 2, 0], &l12);
    out.push(("six-row-c2-0".into(), spec8(a0.clone())));
    out.push(("six-row-c2-1".into(), spec8(a1.clone())));
    out.push(("six-row-c3".into(), spec8(node(&[1, 1, 0], &[a0, a1]))));

    let f = family_123();
    out.push(("three-row-c2-0".into(), spec8(f.c2_0.clone())));
    out.push(("three-row-c2-1".into(), spec8(f.c2_1.clone())));
    let c3 = node(&[1, 3, 0], &[f.c2_0.clone(), f.c2_1.clone()]);
    out.push(("three-row-c3".into(), spec8(c3)));

    let b0 = node(&[2, 1, 0], &l12);
    let b1 = node(&[1, 1, 1], &l12);
    out.push(("extended-c2-1".into(), spec8(b1.clone())));
    out.push(("extended-c2-0".into(), spec8(b0.clone())));
    out.push(("extended-c3".into(), spec8(node(&[3, 1, 0], &[b0, b1]))));

    let pair = [f.c2_0, f.c2_1];
    let d0 = node(&[1, 1, 0], &pair);
    let d1 = node(&[0, 2, 0], &pair);
    out.push(("four-layer-c3-0".into(), spec8(d0.clone())));
    out.push(("four-layer-c3-1".into(), spec8(d1.clone())));
    out.push(("four-layer-c4-0".into(), spec8(node(&[1, 1, 0], &[d0, d1]))));

    out.push((
        "four-layer-d6".into(),
        from_capability("(((1,1,2),(1,2,3)),((1,1,2),(1,2,5)))", 7),
    ));
    out.push((
        "four-layer-d7".into(),
        from_capability("(((0,0,1),(1,1,3)),((1,1,3),(2,3,6)))", 7),
    ));

    let (c2, c3) = three_level_chain();
    for (i, c) in c3.iter().enumerate() {
        out.push((format!("chain-c3-{i}"), spec8(c.clone())));
    }
    let _ = c2;
    out.push(("chain-c4".into(), spec8(node(&[1, 1, 1, 0], &c3))));
    out
}
