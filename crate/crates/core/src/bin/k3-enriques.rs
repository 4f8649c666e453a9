use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use k3_enriques::enriques::{b0, classify_picard11};
use k3_enriques::expr;
use k3_enriques::fqf::{parse_rational, two_elementary_classify, Fqf, QMod2};
use k3_enriques::kummer;
use k3_enriques::lattice::{short_vectors, Lattice};
use k3_enriques::{verify, Error, Result};

/// Exact lattice and discriminant-form calculator for Enriques quotients of K3 surfaces.
#[derive(Parser)]
#[command(name = "k3-enriques", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, signature, determinant and genus invariants of a lattice.
    Info {
        /// Lattice expression, e.g. "U(2)+E8(2)+<-24>".
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Discriminant form with generators and q/b tables.
    Disc {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Number of elements of a finite quadratic form with given order and norm.
    Count {
        /// Form expression, e.g. "u2^5+c(-8)".
        form: String,
        #[arg(long)]
        order: Option<i64>,
        /// Norm as P/Q, read mod 2.
        #[arg(long, allow_hyphen_values = true)]
        norm: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Number of vectors of a given norm in a definite lattice.
    Roots {
        expr: String,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        norm: i64,
        #[arg(long)]
        json: bool,
    },
    /// Classify a Picard-11 lattice and report B0.
    B0 {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Checks on the generic Kummer surface of product type, with the patching table.
    Kummer {
        #[arg(long)]
        json: bool,
    },
    /// Run the complete verification suite.
    Verify {
        #[arg(long)]
        json: bool,
        /// Record wall time per check (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(json: bool, value: serde_json::Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        println!("{text}");
    }
}

fn decomposition(q: &Fqf) -> Result<Vec<String>> {
    let mut parts = vec![];
    for p in q.primes() {
        let qp = q.p_primary_part(p);
        let orders: Vec<String> = qp.orders().iter().map(|d| format!("Z/{d}")).collect();
        let mut s = format!("{p}-part: {}", orders.join(" + "));
        if p == 2 && qp.is_two_elementary() {
            if let Ok(class) = two_elementary_classify(&qp) {
                s.push_str(&format!(" = {class}"));
            }
        }
        parts.push(s);
    }
    Ok(parts)
}

fn info(l: &Lattice, json: bool) -> Result<()> {
    let sig = l.signature();
    let det = l.det();
    let (parts, gauss) = if l.is_nondegenerate() {
        let q = l.discriminant_form()?;
        (decomposition(&q)?, Some(q.gauss_sum_signature()?))
    } else {
        (vec![], None)
    };
    let mut text = format!(
        "lattice: {l}\nrank: {}\nsignature: {sig}\ndet: {det}\neven: yes\nunimodular: {}\n",
        l.rank(),
        if l.is_unimodular() { "yes" } else { "no" }
    );
    text.push_str(&format!(
        "discriminant form: {}\n",
        if parts.is_empty() {
            "trivial".into()
        } else {
            parts.join("; ")
        }
    ));
    match gauss {
        Some(g) => text.push_str(&format!("signature mod 8: {} (Gauss sum {g})", sig.mod8())),
        None => text.push_str("degenerate: no discriminant form"),
    }
    let value = json!({
        "lattice": l.to_string(),
        "rank": l.rank(),
        "signature": sig,
        "det": det.to_string(),
        "even": true,
        "unimodular": l.is_unimodular(),
        "discriminant_form": parts,
        "signature_mod8": sig.mod8(),
        "gauss_sum_signature": gauss,
    });
    emit(json, value, text);
    Ok(())
}

fn disc(l: &Lattice, json: bool) -> Result<()> {
    let g = l.discriminant_group()?;
    let q = g.form();
    let gens: Vec<String> = g
        .generators()
        .iter()
        .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    let gauss = q.gauss_sum_signature()?;
    let mut text = format!("{q}\n");
    for (i, s) in gens.iter().enumerate() {
        text.push_str(&format!("g{i} = {s}\n"));
    }
    text.push_str(&format!("Gauss-sum signature: {gauss}"));
    let value = json!({
        "orders": q.orders(),
        "generators": gens,
        "q": q.qdiag().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "b": q.bmat().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "gauss_sum_signature": gauss,
    });
    emit(json, value, text);
    Ok(())
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Info { expr, json } => info(&expr::lattice(&expr)?, json)?,
        Command::Disc { expr, json } => disc(&expr::lattice(&expr)?, json)?,
        Command::Count {
            form,
            order,
            norm,
            json,
        } => {
            let q = expr::form(&form)?;
            let norm = norm.as_deref().map(parse_rational).transpose()?.map(QMod2::new);
            let n = q.count_elements(order, norm)?;
            let value = json!({
                "form": form,
                "order": order,
                "norm": norm.map(|x| x.to_string()),
                "count": n,
            });
            emit(json, value, n.to_string());
        }
        Command::Roots { expr, norm, json } => {
            let l = expr::lattice(&expr)?;
            let sig = l.signature();
            let n = if sig.minus == 0 && sig.zero == 0 && l.rank() > 0 {
                // positive definite: count in L(-1)
                2 * short_vectors(&l.scaled(-1)?, -norm)?.len()
            } else {
                2 * short_vectors(&l, norm)?.len()
            };
            emit(
                json,
                json!({"lattice": l.to_string(), "norm": norm, "count": n}),
                n.to_string(),
            );
        }
        Command::B0 { expr, json } => {
            let l = expr::lattice(&expr)?;
            let ns = classify_picard11(&l)?
                .ok_or_else(|| Error::InvalidArgument(format!("{l} is not of Type I or Type II")))?;
            let r = b0(&ns)?;
            let status = if r.consistent() { "pass" } else { "fail" };
            let counted = r.b0_counted.map_or("n/a".to_string(), |c| c.to_string());
            let mut text = format!("{}\nB0 table: {}\nB0 counted: {counted}\n", r.ns_type, r.b0_table);
            for n in &r.notes {
                text.push_str(&format!("note: {n}\n"));
            }
            text.push_str(status);
            let mut value = serde_json::to_value(&r).expect("serializable");
            value["type"] = json!(r.ns_type.to_string());
            value["status"] = json!(status);
            emit(json, value, text);
            if !r.consistent() {
                return Ok(3);
            }
        }
        Command::Kummer { json } => return kummer_cmd(json),
        Command::Verify { json, timings } => {
            let report = verify::run(timings);
            if json {
                println!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            if !report.passed() {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

fn kummer_cmd(json: bool) -> Result<u8> {
    let c = kummer::double_kummer_gram()?;
    let o = kummer::curve_overlattice(&c)?;
    let genus = k3_enriques::lattice::same_genus(&o.lattice, &kummer::ns_lattice())?;
    let u2 = kummer::verify_u2_squared()?;
    let cosets = kummer::e8_coset_check()?;
    let e82 = kummer::e82_complement_check()?;
    let table = kummer::patching_table()?;
    let params = kummer::parameter_map()?;

    let mut text = String::new();
    text.push_str(&format!("curve configuration: 24 curves, rank {}\n", c.rank()));
    text.push_str(&format!(
        "curve overlattice: rank {}, signature {}, det {}, same genus as U+E8+D4^2: {genus}\n",
        o.lattice.rank(),
        o.lattice.signature(),
        o.lattice.det()
    ));
    text.push_str(&format!("A_NS = u(2)^2: {u2}\n"));
    text.push_str(&format!("E8 coset representatives: {cosets}\n"));
    for s in &e82.checks {
        text.push_str(&format!(
            "[{}] {}: {}\n",
            if s.passed { "ok" } else { "FAIL" },
            s.name,
            s.detail
        ));
    }
    for w in &e82.witnesses {
        text.push_str(&format!(
            "glue witness: q(z_N) = {}, q(v_M) = {}\n",
            w.z_norm(),
            w.v_norm()
        ));
    }
    text.push_str(&format!(
        "patching elements: {} ({} Lieberman, {} Kondo-Mukai)\n",
        table.entries.len(),
        table.count(kummer::InvolutionKind::Lieberman),
        table.count(kummer::InvolutionKind::KondoMukai)
    ));
    for e in &table.entries {
        text.push_str(&format!("  {:<12} norm {}  {}\n", e.label, e.norm, e.kind));
    }
    text.push_str(&format!(
        "parameter map verified pointwise: {}",
        params.pointwise_map_verified
    ));

    let passed = genus && u2 && cosets == 9 && e82.passed() && table.entries.len() == 15;
    let value = json!({
        "curve_rank": c.rank(),
        "overlattice": {
            "rank": o.lattice.rank(),
            "signature": o.lattice.signature(),
            "det": o.lattice.det().to_string(),
            "same_genus_as_ns": genus,
        },
        "a_ns_is_u2_squared": u2,
        "e8_cosets": cosets,
        "e82_checks": e82.checks,
        "glue_witnesses": e82.witnesses.iter().map(|w| json!({
            "z_norm": w.z_norm().to_string(),
            "v_norm": w.v_norm().to_string(),
        })).collect::<Vec<_>>(),
        "patching_table": table,
        "parameter_map": params,
        "passed": passed,
    });
    emit(json, value, text);
    Ok(if passed { 0 } else { 3 })
}
