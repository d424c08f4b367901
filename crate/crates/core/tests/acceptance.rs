//! The eight acceptance criteria, one PASS/FAIL line each. Runs without the
//! test harness so the lines always print; exits non-zero on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use jennings::algebra_oracle::{t_lower_direct, t_upper_direct, ORACLE_CAP};
use jennings::catalog::{
    build_dihedral, build_from_spec, build_heisenberg, build_paper_presentation, builtin_catalog,
    default_data_dir, load_data_catalog, verify_tables, CatalogEntry,
};
use jennings::classifier::{Classifier, FingerprintIndex, Verdict};
use jennings::dvector_analysis::{enumerate_admissible, lemma_constraints_ok, DVector};
use jennings::lie_dimension::{d_sequence, jennings_index};
use jennings::structure::{derived_subgroup, Subgroup, DEFAULT_CAP};

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

struct Catalog {
    builtin: Vec<CatalogEntry>,
    data: Vec<CatalogEntry>,
}

impl Catalog {
    fn load() -> Result<Self, String> {
        let mut builtin = builtin_catalog().map_err(|e| e.to_string())?;
        // The order-3^7 item groups only fit the oracle as quotients.
        for (item, keep) in [(66, 5), (67, 5)] {
            let g = build_paper_presentation(item, 3).map_err(|e| e.to_string())?;
            let q = g
                .presentation
                .quotient_by_tail(keep)
                .map_err(|e| e.to_string())?;
            let mut e = g.clone();
            e.name = format!("{}/tail{keep}", g.name);
            e.presentation = q;
            builtin.push(e);
        }
        let data = load_data_catalog(&default_data_dir()).map_err(|e| e.to_string())?;
        Ok(Catalog { builtin, data })
    }

    fn all(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.builtin.iter().chain(&self.data)
    }
}

fn criterion_1(cat: &Catalog) -> Outcome {
    let mut n = 0;
    let mut primes = std::collections::BTreeSet::new();
    for e in cat.all().filter(|e| e.order() <= ORACLE_CAP as u128) {
        let g = &e.presentation;
        let p = g.p();
        let direct = t_upper_direct(g, p, ORACLE_CAP).map_err(|x| format!("{}: {x}", e.name))?;
        let d = d_sequence(g, p, DEFAULT_CAP).map_err(|x| format!("{}: {x}", e.name))?;
        ensure(direct == jennings_index(&d), || {
            format!(
                "{}: direct {direct} vs Jennings {}",
                e.name,
                jennings_index(&d)
            )
        })?;
        n += 1;
        primes.insert(p);
    }
    ensure(n >= 25, || format!("only {n} groups"))?;
    ensure(primes.is_superset(&[2, 3, 5].into()), || {
        format!("primes {primes:?}")
    })?;
    Ok(format!("{n} groups, primes {primes:?}"))
}

fn criterion_2(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for e in cat.all() {
        let g = &e.presentation;
        let d = d_sequence(g, g.p(), DEFAULT_CAP).map_err(|x| format!("{}: {x}", e.name))?;
        let derived =
            derived_subgroup(&Subgroup::whole(g), DEFAULT_CAP).map_err(|x| x.to_string())?;
        ensure(d.total() == derived.log_order() as u64, || {
            format!(
                "{}: Σd = {} but log|G′| = {}",
                e.name,
                d.total(),
                derived.log_order()
            )
        })?;
        n += 1;
    }
    Ok(format!("{n} groups"))
}

fn criterion_3(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for e in cat
        .all()
        .filter(|e| e.order() <= ORACLE_CAP as u128 && !e.presentation.is_abelian())
    {
        let g = &e.presentation;
        let p = g.p() as u64;
        let up = t_upper_direct(g, g.p(), ORACLE_CAP).map_err(|x| x.to_string())?;
        let low = t_lower_direct(g, g.p(), ORACLE_CAP).map_err(|x| x.to_string())?;
        let derived = derived_subgroup(&Subgroup::whole(g), DEFAULT_CAP)
            .map_err(|x| x.to_string())?
            .order() as u64;
        ensure(p < low && low <= up && up <= derived + 1, || {
            format!(
                "{}: p+1={}, t_L={low}, t^L={up}, |G′|+1={}",
                e.name,
                p + 1,
                derived + 1
            )
        })?;
        ensure(p <= 3 || low == up, || {
            format!("{}: t_L ≠ t^L at p = {p}", e.name)
        })?;
        n += 1;
    }
    Ok(format!("{n} non-abelian groups"))
}

fn criterion_4(index: &FingerprintIndex) -> Outcome {
    let g = build_from_spec("free_class2:2,5")
        .map_err(|e| e.to_string())?
        .presentation;
    let r = Classifier::new(index)
        .verify_theorem(&g, 2)
        .map_err(|e| e.to_string())?;
    ensure(r.t_upper == 12, || format!("t^L = {}", r.t_upper))?;
    let items: Vec<u32> = r.matches.iter().map(|m| m.item).collect();
    ensure(items == [91], || format!("matches {items:?}"))?;
    ensure(r.verdict == Verdict::Consistent, || r.explanation.clone())?;
    let t7 = jennings_index(&DVector::from_pairs(7, &[(2, 3), (8, 1)]));
    ensure(t7 == 62, || format!("{{2:3,8:1}} at 7 gives {t7}"))?;
    Ok(
        "free class-2 rank 5 at p = 2: t^L = 12, item 91, CONSISTENT; {2:3,8:1} at p = 7: 62"
            .into(),
    )
}

fn survivors(p: u32) -> Vec<String> {
    enumerate_admissible(p, 10)
        .iter()
        .map(|d| d.to_string())
        .collect()
}

fn criterion_5() -> Outcome {
    let common = [
        "{2:1,3:1,4:1,5:1}",
        "{2:1,3:3,4:1}",
        "{2:2,3:1,4:2}",
        "{2:2,3:4}",
        "{2:3,3:2,4:1}",
        "{2:4,3:3}",
        "{2:5,3:1,4:1}",
        "{2:6,3:2}",
        "{2:8,3:1}",
        "{2:10}",
    ];
    let extra: [(u32, &[&str]); 5] = [
        (2, &["{2:2,3:2,5:1}", "{2:4,3:1,5:1}"]),
        (3, &["{2:4,4:2}", "{2:7,4:1}"]),
        (5, &["{2:1,3:2,6:1}", "{2:3,3:1,6:1}", "{2:5,6:1}"]),
        (7, &["{2:1,3:1,8:1}", "{2:3,8:1}"]),
        (11, &[]),
    ];
    for (p, more) in extra {
        let got = survivors(p);
        let mut want: Vec<&str> = common.iter().chain(more).copied().collect();
        want.sort_by_key(|s| got.iter().position(|g| g == s).unwrap_or(usize::MAX));
        ensure(
            got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| a == b),
            || format!("p = {p}: got {got:?}"),
        )?;
    }
    let only = |d: &str, p: u32| {
        [2, 3, 5, 7, 11]
            .into_iter()
            .all(|q| survivors(q).iter().any(|s| s == d) == (q == p))
    };
    ensure(
        survivors(7).iter().any(|s| s.contains("8:"))
            && (2..=11).all(|q| q == 7 || !survivors(q).iter().any(|s| s.contains("8:"))),
        || "d_(8) ≠ 0 outside p = 7".into(),
    )?;
    ensure(only("{2:5,6:1}", 5), || "{2:5,6:1}".into())?;
    ensure(only("{2:4,3:1,5:1}", 2), || "{2:4,3:1,5:1}".into())?;
    // The one case where the constraints as stated are stricter than the
    // case analysis they feed: the analysis keeps {2:1,4:3} at p = 3.
    let (ok, _) = lemma_constraints_ok(&DVector::from_pairs(3, &[(2, 1), (4, 3)]));
    ensure(!ok, || "{2:1,4:3} at p = 3 unexpectedly admissible".into())?;
    Ok("golden lists for p = 2,3,5,7,11; deviation: {2:1,4:3} at p = 3 is kept by the case analysis but rejected by part 1 as stated".into())
}

fn criterion_6(cat: &Catalog) -> Outcome {
    let rows = verify_tables(&cat.data, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for (order, min) in [(3125u128, 5), (2187, 5), (243, 10)] {
        let of_order: Vec<_> = rows
            .iter()
            .filter(|r| {
                cat.data
                    .iter()
                    .any(|e| e.name == r.name && e.order() == order)
            })
            .collect();
        ensure(of_order.len() >= min, || {
            format!("order {order}: {} rows", of_order.len())
        })?;
        if let Some(bad) = of_order.iter().find(|r| !r.pass) {
            return Err(format!("{} fails: {:?}", bad.name, bad.columns));
        }
        summary.push(format!("{} rows of order {order}", of_order.len()));
    }
    Ok(summary.join(", "))
}

fn criterion_7(cat: &Catalog) -> Outcome {
    let mut n = 0;
    for e in cat.all() {
        let g = &e.presentation;
        let d = d_sequence(g, g.p(), DEFAULT_CAP).map_err(|x| x.to_string())?;
        let (ok, why) = lemma_constraints_ok(&d);
        ensure(ok, || format!("{} {d}: {why:?}", e.name))?;
        n += 1;
    }
    Ok(format!("{n} d-sequences, no violations"))
}

fn criterion_8(index: &FingerprintIndex) -> Outcome {
    let c = Classifier::new(index);
    let cases = [
        (build_dihedral(16).map_err(|e| e.to_string())?, 2, 5),
        (build_heisenberg(7).map_err(|e| e.to_string())?, 7, 8),
    ];
    for (e, p, t) in cases {
        let r = c
            .verify_theorem(&e.presentation, p)
            .map_err(|x| x.to_string())?;
        ensure(r.t_upper == t, || {
            format!("{}: t^L = {}", e.name, r.t_upper)
        })?;
        ensure(r.matches.is_empty(), || {
            format!("{}: matched {:?}", e.name, r.matches)
        })?;
        ensure(r.verdict == Verdict::Consistent, || r.explanation.clone())?;
    }
    Ok("dihedral:16 at 2 (t^L = 5) and heisenberg:7 at 7 (t^L = 8): no match, CONSISTENT".into())
}

fn main() -> ExitCode {
    let cat = match Catalog::load() {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL catalog: {e}");
            return ExitCode::FAILURE;
        }
    };
    let index = FingerprintIndex::from_entries(&cat.data);
    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("oracle and Jennings agree", &|| criterion_1(&cat)),
        ("Jennings mass check", &|| criterion_2(&cat)),
        ("index bounds and t_L = t^L for p > 3", &|| {
            criterion_3(&cat)
        }),
        ("headline index reproduction", &|| criterion_4(&index)),
        ("proof-skeleton survivors", &criterion_5),
        ("table verification", &|| criterion_6(&cat)),
        ("realizability sanity", &|| criterion_7(&cat)),
        ("negative controls", &|| criterion_8(&index)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS {} {name}: {note} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
