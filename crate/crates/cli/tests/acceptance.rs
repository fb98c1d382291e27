//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Each criterion collects named sub-checks. A criterion passes when all of
//! them pass. The run as a whole asserts that the failing set is exactly
//! `KNOWN_FAILURES`, so a silent regression or an unexpected fix both show up.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use tsr_core::bredon::{
    bredon_complex, bredon_homology_formula, block_labels, chen_ruan_dims, homology, k_homology,
    split_blocks, split_induction_matrix, splitting_basis, SUPPORTED,
};
use tsr_core::complexes::{parse_complex, serialize_complex, torsion_subcomplex};
use tsr_core::groups::{
    catalog_group, dihedral_mod_ell_homology, embeddings, mod_ell_homology_bruteforce,
    mod_ell_homology_of_generated,
};
use tsr_core::reduction::{
    merge, merge_candidates, reduce, replay, replay_states, BPrimeClause, MoveKind,
};
use tsr_core::series::{
    canonical_series, equivariant_graph_cohomology_oracle, poincare_2torsion, poincare_3torsion,
    sl2_mod2_dims, CanonicalSeries, ComponentCounts,
};
use tsr_core::{AbelianGroup, GroupTag, OrbitComplex, Perm, SubgroupCensus};

/// Criteria expected to fail, with the reason.
///
/// 2: `path_c2_d3_c2` at ℓ=2 cannot reduce to a single C2 edge. Whichever
/// move runs first, a C2 vertex ends up terminal on a C2 edge. Both stabilizers
/// are C2, so the terminal-cell cut always applies and the fixpoint is a
/// single C2 vertex. The remaining sub-checks of criterion 2 pass.
const KNOWN_FAILURES: &[usize] = &[2];

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) {
        let ok = got == want;
        let detail = if ok {
            String::new()
        } else {
            format!("got {got:?}, want {want:?}")
        };
        self.check(name, ok, detail);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixtures().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn fixture(name: &str) -> OrbitComplex {
    parse_complex(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn tsr(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tsr"))
        .args(args)
        .env_remove("TSR_FIXTURES")
        .current_dir(fixtures())
        .output()
        .expect("run tsr");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn census(k: ComponentCounts) -> SubgroupCensus {
    SubgroupCensus::from_components(&k)
}

fn counts(o2: u64, iota2: u64, theta: u64, rho: u64, o3: u64, iota3: u64) -> ComponentCounts {
    ComponentCounts {
        o2,
        iota2,
        theta,
        rho,
        o3,
        iota3,
    }
}

fn dihedral_generators(n: u8) -> Vec<Perm> {
    let rot: Vec<u8> = (0..n).collect();
    let refl: Vec<Vec<u8>> = (1..=(n - 1) / 2).map(|i| vec![i, n - i]).collect();
    let refl: Vec<&[u8]> = refl.iter().map(Vec::as_slice).collect();
    vec![
        Perm::from_cycles(n as usize, &[&rot]).unwrap(),
        Perm::from_cycles(n as usize, &refl).unwrap(),
    ]
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::default();
    for (n, ell) in [(3u32, 3u32), (5, 3), (5, 5), (3, 5)] {
        let gens = if n == 3 {
            GroupTag::D3.generators()
        } else {
            dihedral_generators(n as u8)
        };
        let oracle = mod_ell_homology_of_generated(&gens, ell, 4).unwrap();
        let formula: Vec<u64> = (0..=4).map(|q| dihedral_mod_ell_homology(n, ell, q).unwrap()).collect();
        c.eq(
            format!("D{n} at ℓ={ell}, q ≤ 4"),
            oracle.dims.values().copied().collect::<Vec<_>>(),
            formula,
        );
    }
    // the catalog route agrees with the generator route on D3
    for ell in [3, 5] {
        c.eq(
            format!("catalog D3 at ℓ={ell}"),
            mod_ell_homology_bruteforce(&catalog_group(GroupTag::D3), ell, 4).unwrap(),
            mod_ell_homology_of_generated(&GroupTag::D3.generators(), ell, 4).unwrap(),
        );
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::default();

    let (path, _) = reduce(&fixture("path_c2_d3_c2.json"), 2).unwrap();
    let edges: Vec<_> = path.cells_of_dim(1).collect();
    let one_c2_edge = edges.len() == 1 && edges[0].stabilizer == GroupTag::C2;
    let shape: Vec<String> = path
        .cells()
        .iter()
        .map(|x| format!("{}:{}:{}", x.dim, x.id, x.stabilizer))
        .collect();
    c.check(
        "path_c2_d3_c2 at ℓ=2 reduces to one C2 edge",
        one_c2_edge,
        format!("fixpoint is {shape:?}"),
    );

    let edge3 = fixture("bianchi_edge3.json");
    let (r, log) = reduce(&edge3, 3).unwrap();
    c.check(
        "bianchi_edge3 at ℓ=3 is a fixpoint",
        log.moves.is_empty() && r == torsion_subcomplex(&edge3, 3).unwrap(),
        format!("{} moves", log.moves.len()),
    );

    let (_, log) = reduce(&fixture("sl3z_intermediate.json"), 2).unwrap();
    let cut = log.moves.iter().any(|m| {
        m.kind == MoveKind::Cut
            && m.cells.first().map(String::as_str) == Some("N'")
            && m.condition == Some(BPrimeClause::Quotients)
    });
    c.check("SL3 terminal N' branch cut via B'(1)", cut, format!("{:?}", log.moves));

    let pinned = [
        ("path_c2_d3_c2.json", "2", "path_c2_d3_c2.reduced2", None),
        ("bianchi_edge3.json", "3", "bianchi_edge3.reduced3", None),
        ("sl3z_intermediate.json", "2", "sl3z_intermediate.reduced2", None),
        (
            "sl3z_intermediate.json",
            "2",
            "sl3z_intermediate.scripted2",
            Some("sl3z_q_elimination.script.jsonl"),
        ),
    ];
    let dir = tempdir();
    for (input, prime, expected, script) in pinned {
        let log_path = dir.join(format!("{expected}.log.jsonl"));
        let log_arg = log_path.to_str().unwrap();
        let mut args = vec!["reduce", "--prime", prime, "--input", input, "--log", log_arg];
        if let Some(s) = script {
            args.extend(["--script", s]);
        }
        let (code, stdout) = tsr(&args);
        let want = fixture_text(&format!("expected/{expected}.json"));
        c.check(
            format!("{expected}.json byte-for-byte"),
            code == 0 && stdout == want.as_bytes(),
            format!("exit {code}"),
        );
        let got_log = std::fs::read_to_string(&log_path).unwrap_or_default();
        let want_log = fixture_text(&format!("expected/{expected}.log.jsonl"));
        c.check(format!("{expected}.log.jsonl byte-for-byte"), got_log == want_log, "");
    }
    c
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tsr-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::default();
    let cases = [
        ("path_c2_d3_c2.json", 2),
        ("path_c2_d3_c2.json", 3),
        ("d3_loop2.json", 2),
        ("bianchi_circle2.json", 2),
        ("bianchi_edge3.json", 3),
        ("graphfive.json", 2),
    ];
    let mut executed = 0;
    let mut merges = 0;
    for (name, ell) in cases {
        let x = fixture(name);
        let (_, log) = reduce(&x, ell).unwrap();
        let states = replay_states(&x, &log, ell).unwrap();
        let dims: Vec<Vec<u64>> = states
            .iter()
            .map(|s| equivariant_graph_cohomology_oracle(s, ell, 3..=10).unwrap())
            .collect();
        for (k, mv) in log.moves.iter().enumerate() {
            executed += 1;
            merges += usize::from(mv.kind != MoveKind::Cut);
            c.eq(
                format!("{name} ℓ={ell} move {} {:?} {:?}", k + 1, mv.kind, mv.cells),
                dims[k + 1].clone(),
                dims[k].clone(),
            );
        }
    }
    // every merge candidate of every 1-dimensional fixture, executed alone
    for (name, ell) in [("path_c2_d3_c2.json", 2), ("d3_loop2.json", 2), ("graphfive.json", 2)] {
        let x = torsion_subcomplex(&fixture(name), ell).unwrap();
        let before = equivariant_graph_cohomology_oracle(&x, ell, 3..=10).unwrap();
        for cand in merge_candidates(&x) {
            let Ok((y, _)) = merge(&x, &cand, ell) else { continue };
            executed += 1;
            merges += 1;
            c.eq(
                format!("{name} ℓ={ell} merge at {}", cand.sigma),
                equivariant_graph_cohomology_oracle(&y, ell, 3..=10).unwrap(),
                before.clone(),
            );
        }
    }
    c.check(
        "at least one merge and one cut were exercised",
        merges > 0 && executed > merges,
        format!("{executed} moves, {merges} merges"),
    );
    c
}

fn rational_strings(s: CanonicalSeries, from: usize, to: usize) -> Vec<String> {
    canonical_series(s).expand(to)[from..=to]
        .iter()
        .map(ToString::to_string)
        .collect()
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();
    let circle = rational_strings(CanonicalSeries::Circle, 3, 20);
    c.eq("circle series is 2 for 3 ≤ q ≤ 20", circle, vec!["2".to_string(); 18]);
    let edge = rational_strings(CanonicalSeries::Edge3, 3, 20);
    let pattern: Vec<String> = (3..=20).map(|q| ["2", "1", "0", "1"][(q - 3) % 4].to_string()).collect();
    c.eq("edge series has period (2,1,0,1) from q=3", edge, pattern);
    let d2 = rational_strings(CanonicalSeries::D2Star, 3, 20);
    let half: Vec<String> = (3..=20).map(|q| format!("{}/2", 2 * q - 1)).collect();
    c.eq("D2* series is q − 1/2 for 3 ≤ q ≤ 20", d2, half);

    let circle_dims = canonical_series(CanonicalSeries::Circle).expand_dims(10).unwrap();
    let oracle = equivariant_graph_cohomology_oracle(
        &torsion_subcomplex(&fixture("bianchi_circle2.json"), 2).unwrap(),
        2,
        3..=10,
    )
    .unwrap();
    c.eq("circle2 oracle equals circle series, 3 ≤ q ≤ 10", oracle, circle_dims[3..].to_vec());
    let edge_dims = canonical_series(CanonicalSeries::Edge3).expand_dims(10).unwrap();
    let oracle = equivariant_graph_cohomology_oracle(
        &torsion_subcomplex(&fixture("bianchi_edge3.json"), 3).unwrap(),
        3,
        3..=10,
    )
    .unwrap();
    c.eq("edge3 oracle equals edge series, 3 ≤ q ≤ 10", oracle, edge_dims[3..].to_vec());
    c
}

/// Deterministic 64-bit LCG (Knuth's MMIX constants).
struct Lcg(u64);

impl Lcg {
    fn below(&mut self, n: u64) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 33) % n
    }
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = Lcg(0x5eed);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let k = counts(
            rng.below(5),
            rng.below(5),
            rng.below(5),
            rng.below(5),
            rng.below(5),
            rng.below(5),
        );
        let s = census(k);
        if s.validate().is_err() {
            bad.push(format!("{s:?} violates the census invariants"));
            continue;
        }
        for (ell, series) in [(2, poincare_2torsion(&s)), (3, poincare_3torsion(&s))] {
            let series = match series {
                Ok(p) => p,
                Err(e) => {
                    bad.push(format!("ℓ={ell} {s:?}: {e}"));
                    continue;
                }
            };
            for (q, a) in series.expand(20).iter().enumerate() {
                let fine = a.is_integer() && *a.numer() >= 0.into() && (q >= 3 || *a.numer() == 0.into());
                if !fine {
                    bad.push(format!("ℓ={ell} q={q} coefficient {a} for {s:?}"));
                }
            }
        }
    }
    c.check("200 sampled censuses give integral non-negative series", bad.is_empty(), bad.join("; "));
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::default();
    for &t in SUPPORTED {
        let det = splitting_basis(t).unwrap().det();
        c.check(format!("basis of R({t}) is unimodular"), det.abs() == 1, format!("det {det}"));
    }
    let inclusions = [
        (GroupTag::C2, GroupTag::D2),
        (GroupTag::C2, GroupTag::D3),
        (GroupTag::C3, GroupTag::D3),
        (GroupTag::C2, GroupTag::A4),
        (GroupTag::C3, GroupTag::A4),
    ];
    for (h, g) in inclusions {
        let (lh, lg) = (block_labels(h).unwrap(), block_labels(g).unwrap());
        for k in 0..embeddings(h, g).len() {
            let m = split_induction_matrix(h, g, k).unwrap();
            let off: Vec<(usize, usize)> = (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .filter(|&(i, j)| m.get(i, j) != 0 && lg[i] != lh[j])
                .collect();
            c.check(
                format!("Ind {h} → {g} (embedding {k}) is block diagonal"),
                off.is_empty(),
                format!("off-block entries at {off:?}"),
            );
        }
    }
    c
}

fn pad(mut h: Vec<AbelianGroup>) -> Vec<AbelianGroup> {
    h.resize(2, AbelianGroup::trivial());
    h
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::default();
    // (fixture, component counts, prime whose block is compared)
    let cases = [
        ("bianchi_circle2.json", counts(1, 0, 0, 0, 0, 0), 2),
        ("bianchi_edge3.json", counts(0, 0, 0, 0, 0, 1), 3),
        ("graphfive.json", counts(0, 0, 1, 0, 0, 0), 2),
        ("graphtwo.json", counts(0, 0, 0, 1, 0, 0), 2),
        ("a4_edge.json", counts(0, 1, 0, 0, 0, 0), 2),
    ];
    for (name, k, ell) in cases {
        let blocks = split_blocks(&bredon_complex(&fixture(name)).unwrap()).unwrap();
        let f = bredon_homology_formula(&census(k)).unwrap();
        let (block, want) = if ell == 2 {
            (&blocks.two, vec![f.h0_2, f.h1_2])
        } else {
            (&blocks.three, vec![f.h0_3, f.h1_3])
        };
        let got = pad(homology(block).unwrap());
        c.eq(format!("{name} {ell}-part"), got, want);
    }
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::default();
    let s = SubgroupCensus::from_json(r#"{"z2": 1, "λ4": 1, "λ6": 1, "λ6star": 1}"#).unwrap();
    let k = k_homology(&s, &AbelianGroup::free(1), 0).unwrap();
    c.eq(
        "z2=1, o2=1, ι3=1, H1=Z gives K0 = K1 = Z^3",
        (k.k0.to_string(), k.k1.to_string()),
        ("Z^3".to_string(), "Z^3".to_string()),
    );
    let s = SubgroupCensus::from_json(r#"{"z2": 1, "d2": 2}"#).unwrap();
    let k = k_homology(&s, &AbelianGroup::trivial(), 0).unwrap();
    c.eq("z2=1, d2=2 gives K0 = Z^2 ⊕ Z/2", k.k0.to_string(), "Z^2 ⊕ Z/2".to_string());
    let s = SubgroupCensus::from_json(r#"{"λ4": 2, "λ4star": 1, "λ6": 1, "λ6star": 1}"#).unwrap();
    let dims = chen_ruan_dims(&s, &BTreeMap::new(), true).unwrap();
    c.eq(
        "λ4=2, λ4*=1, λ6=1, λ6*=1 adds 3 in degree 2 and 2 in degree 3",
        dims,
        BTreeMap::from([(2, 3), (3, 2)]),
    );
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::default();
    let got: Vec<u64> = (1..=21).map(|q| sl2_mod2_dims(1, 0, q).unwrap()).collect();
    let want: Vec<u64> = (1..=21).map(|q| [1, 2, 4, 3][(q - 1) % 4]).collect();
    c.eq("β1=1, β2=0 gives 1;2;4;3;1 cyclically from q=1", got, want);
    c
}

fn criterion_10() -> Criterion {
    let mut c = Criterion::default();
    let census = r#"{"λ4": 3, "λ4star": 3, "μ2": 2, "z2": 3, "d2": 2}"#;
    let runs: Vec<Vec<&str>> = vec![
        vec!["extract", "--prime", "2", "--input", "sl3z_soule.json"],
        vec!["extract", "--prime", "3", "--input", "bianchi_edge3.json", "--json"],
        vec!["reduce", "--prime", "2", "--input", "path_c2_d3_c2.json", "--json"],
        vec!["reduce", "--prime", "2", "--input", "sl3z_soule.json"],
        vec!["poincare", "--prime", "2", "--census", census, "--degrees", "12"],
        vec!["poincare", "--prime", "3", "--census", r#"{"λ6": 1, "λ6star": 1, "μ3": 2}"#, "--json"],
        vec!["bredon", "--input", "graphfive.json", "--census", census],
        vec!["k-homology", "--census", census, "--h1-orbit", "Z"],
        vec!["chen-ruan", "--census", census, "--quotient-dims", "0:1,1:2"],
        vec!["e2-page", "--census", census, "--chi-xs", "1"],
        vec!["oracle", "--prime", "3", "--group", "D3"],
        vec!["oracle", "--prime", "2", "--input", "graphfive.json", "--degrees", "6"],
        vec!["validate", "--input", "graphtwo.json"],
    ];
    for args in &runs {
        let (a, out_a) = tsr(args);
        let (b, out_b) = tsr(args);
        c.check(
            format!("tsr {} twice", args.join(" ")),
            a == 0 && a == b && out_a == out_b && !out_a.is_empty(),
            format!("exit codes {a}, {b}"),
        );
    }
    for (name, ell) in [
        ("path_c2_d3_c2.json", 2),
        ("d3_loop2.json", 2),
        ("sl3z_soule.json", 2),
        ("sl3z_soule.json", 3),
        ("sl3z_intermediate.json", 2),
        ("graphfive.json", 2),
    ] {
        let x = fixture(name);
        let (r, log) = reduce(&x, ell).unwrap();
        let replayed = replay(&x, &log, ell).unwrap();
        c.check(
            format!("{name} ℓ={ell} log replays to the fixpoint"),
            serialize_complex(&replayed) == serialize_complex(&r),
            "",
        );
    }
    c
}

#[test]
fn acceptance() {
    let criteria: Vec<(usize, fn() -> Criterion)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    // Written to the raw stderr handle so the report shows without --nocapture.
    let mut report = std::io::stderr();
    let mut failed = Vec::new();
    for (n, run) in criteria {
        let c = run();
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(report, "criterion {n}: {status} ({} checks)", c.checks.len());
        for check in c.checks.iter().filter(|k| !k.ok) {
            let _ = writeln!(report, "    failed: {}: {}", check.name, check.detail);
        }
        if !c.passed() {
            failed.push(n);
        }
    }
    assert_eq!(failed, KNOWN_FAILURES, "failing criteria differ from the documented set");
}
