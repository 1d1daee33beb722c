//! Plain-text tables.

use supercohom::cochain::CochainSpace;
use supercohom::io::{ReportJson, RepresentativeJson};
use supercohom::repr::Representation;
use supercohom::restricted::{RestrictedSpace, RestrictedTwoCochain};
use supercohom::superalg::SuperAlgebra;

pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = rows
        .iter()
        .map(|r| r.len())
        .chain([header.len()])
        .max()
        .unwrap_or(0);
    let mut width = vec![0usize; cols];
    for r in rows.iter().chain(std::iter::once(
        &header.iter().map(|s| s.to_string()).collect(),
    )) {
        for (k, c) in r.iter().enumerate() {
            width[k] = width[k].max(c.chars().count());
        }
    }
    let line = |r: &[String]| {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{:w$}", c, w = width[k]))
            .collect();
        format!("{}\n", cells.join("  ").trim_end())
    };
    let mut out = String::new();
    if !header.is_empty() {
        let h: Vec<String> = header.iter().map(|s| s.to_string()).collect();
        out.push_str(&line(&h));
        let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&line(&rule));
    }
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn term(c: u32, name: &str) -> String {
    if c == 1 {
        name.to_string()
    } else {
        format!("{c}*{name}")
    }
}

pub fn cochain_terms(
    l: &SuperAlgebra,
    m: &Representation,
    space: &CochainSpace,
    coords: &[u32],
) -> String {
    let show_module = m.dim() > 1 || !m.is_trivial();
    let terms: Vec<String> = coords
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(k, &v)| {
            let (t, a) = space.split(k);
            let mut name = format!("[{}]", t.name(l));
            if show_module {
                name = format!("{name}(x){}", m.basis().name(a));
            }
            term(v, &name)
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn pair_terms(
    l: &SuperAlgebra,
    m: &Representation,
    rs: &RestrictedSpace,
    pair: &RestrictedTwoCochain,
) -> String {
    let mut s = cochain_terms(l, m, rs.cochains(), &pair.phi.coords);
    let omega: Vec<String> = pair
        .omega
        .iter()
        .enumerate()
        .filter(|(_, v)| v.iter().any(|&c| c != 0))
        .map(|(i, v)| format!("{} -> {:?}", l.basis().name(i), v))
        .collect();
    if !omega.is_empty() {
        s.push_str(&format!("; omega: {}", omega.join(", ")));
    }
    s
}

pub fn report_table(l: &SuperAlgebra, m: &Representation, r: &ReportJson) -> String {
    let lambda = r
        .lambda
        .as_ref()
        .map(|v| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .unwrap_or_else(|| "-".into());
    let rows = vec![
        vec!["theory".into(), r.theory.to_string()],
        vec!["degree".into(), r.degree.to_string()],
        vec!["p".into(), r.p.to_string()],
        vec!["lambda".into(), lambda],
        vec!["dim Z".into(), r.dim_z.to_string()],
        vec!["dim B".into(), r.dim_b.to_string()],
        vec![
            "dim H".into(),
            format!("{} (even {}, odd {})", r.dim_h, r.dim_h_even, r.dim_h_odd),
        ],
    ];
    let mut out = table(&[], &rows);
    out.push_str("representatives:\n");
    let space = CochainSpace::new(l, m, r.degree).expect("degree checked");
    let rs = RestrictedSpace::new(l, m, r.degree).expect("degree checked");
    for (k, rep) in r.representatives.iter().enumerate() {
        let text = match rep {
            RepresentativeJson::Cochain(c) => match c.to_cochain(&space, l) {
                Ok(c) => cochain_terms(l, m, &space, &c.coords),
                Err(e) => e.to_string(),
            },
            RepresentativeJson::Pair(pj) => match pj.to_pair(&rs, l) {
                Ok(pair) => pair_terms(l, m, &rs, &pair),
                Err(e) => e.to_string(),
            },
        };
        out.push_str(&format!("  {:>3}  {}\n", k + 1, text));
    }
    out
}
