//! Golden-file cases shared by the golden and acceptance targets.

use std::path::Path;

use pvkit::{run_args, Command, Outcome};

const F: &str = "tests/fixtures";

pub fn cases() -> Vec<(&'static str, Vec<String>)> {
    let i = |name: &str| vec!["--input".to_string(), format!("{F}/{name}")];
    let b = |name: &str| vec!["--input".to_string(), format!("builtin:{name}")];
    let cmd = |c: &str, parts: Vec<Vec<String>>| -> Vec<String> {
        let mut v: Vec<String> = c.split(' ').map(str::to_string).collect();
        v.extend(parts.into_iter().flatten());
        v
    };
    let s = |x: &str| vec![x.to_string()];
    vec![
        ("gauge_check_ok", cmd("gauge-check", vec![i("inv_x.json"), i("zero1.json"), i("inv_x.json")])),
        ("gauge_check_wrong", cmd("gauge-check", vec![i("inv_x.json"), i("half.json"), i("inv_x.json")])),
        ("gauge_check_singular", cmd("gauge-check", vec![i("inv_x.json"), i("zero1.json"), i("singular.json")])),
        ("rank1_half", cmd("rank1-classify", vec![s("--expr"), s("1/(2*x)")])),
        ("rank1_half_file", cmd("rank1-classify", vec![i("half.json"), s("--zeta-level"), s("1")])),
        ("rank1_zeta", cmd("rank1-classify", vec![s("--expr"), s("zeta/(4*x)"), s("--zeta-level"), s("4")])),
        ("rank1_log_derivative", cmd("rank1-classify", vec![s("--expr"), s("2/x + 1/(x-1)")])),
        ("rank1_exp", cmd("rank1-classify", vec![s("--expr"), s("1")])),
        ("rank1_bad_syntax", cmd("rank1-classify", vec![i("bad_syntax.json")])),
        ("diag_group_gm_mu2", cmd("diag-group", vec![i("diag_gm_mu2.json")])),
        ("diag_group_exprs", cmd("diag-group", vec![s("--expr"), s("1/(2*x)"), s("--expr"), s("1/(2*(x-1))")])),
        ("diag_group_zeta", cmd("diag-group", vec![i("diag_zeta.json")])),
        ("torsor_iso_ok", cmd("torsor iso-check", vec![i("inv_x.json"), i("zero1.json"), i("inv_x.json")])),
        ("split_report_mu6", cmd("split-report", vec![i("diag_mu6.json")])),
        ("split_report_bound", cmd("torsor split-report", vec![i("airy_like.json")])),
        ("hopf_kummer2", cmd("hopf-check", vec![b("kummer2")])),
        ("hopf_kummer3", cmd("hopf-check", vec![b("kummer3")])),
        ("hopf_kummer4", cmd("hopf-check", vec![b("kummer4")])),
        ("hopf_split3", cmd("hopf-check", vec![b("split3")])),
        ("hopf_corrupted", cmd("hopf-check", vec![b("corrupted")])),
        ("hopf_unknown_builtin", cmd("hopf-check", vec![b("kummer9")])),
        ("descent_rank2_k2", cmd("descent-roundtrip", vec![i("phi_rank2.json"), b("kummer2")])),
        ("descent_rank2_k3", cmd("descent-roundtrip", vec![i("phi_rank2.json"), b("kummer3")])),
        ("h1_enumerate_mu3", cmd("h1 enumerate", vec![i("h1_mu3_gm.json")])),
        ("h1_enumerate_ga", cmd("h1-enumerate", vec![i("h1_mu4_ga.json")])),
        ("h1_enumerate_inversion", cmd("h1-enumerate", vec![i("h1_mu2_inversion.json")])),
        ("h1_enumerate_gl2", cmd("h1-enumerate", vec![i("h1_mu2_gl2.json")])),
        ("h1_check_sign", cmd("h1 check", vec![i("h1_check_sign.json")])),
        ("h1_check_two", cmd("h1-check", vec![i("h1_check_two.json")])),
        ("h1_check_gl2", cmd("h1-check", vec![i("h1_check_gl2.json")])),
        ("h1_twist_sign", cmd("h1 twist", vec![i("h1_twist_sign.json")])),
        ("h1_twist_mu3", cmd("h1-twist", vec![i("h1_twist_mu3.json")])),
        ("h1_untwist_sqrt", cmd("h1 untwist", vec![i("h1_untwist_sqrt.json")])),
        ("h1_untwist_rational", cmd("h1-untwist", vec![i("h1_untwist_rational.json")])),
        ("dcsa_check_iso_ok", cmd("dcsa check-iso", vec![i("p_zero.json"), i("p_half.json"), i("u_diag_x.json")])),
        ("dcsa_check_iso_wrong", cmd("dcsa-check-iso", vec![i("p_zero.json"), i("p_zero.json"), i("u_diag_x.json")])),
        ("dcsa_not_traceless", cmd("dcsa-check-iso", vec![i("p_not_traceless.json"), i("p_zero.json"), i("u_diag_x.json")])),
        ("dcsa_split_quarter", cmd("dcsa split-degree", vec![i("p_quarter.json")])),
        ("dcsa_split_const", cmd("dcsa-split-degree", vec![i("p_const.json")])),
        ("dcsa_split_generic", cmd("dcsa-split-degree", vec![i("p_generic.json")])),
        ("dcsa_split_n3", cmd("dcsa-split-degree", vec![i("p_third3.json")])),
        ("dcsa_adjoint", cmd("dcsa adjoint", vec![i("p_x.json")])),
        ("json_only", cmd("rank1-classify", vec![s("--expr"), s("1/(2*x)"), s("--json")])),
        ("unknown_command", cmd("frobnicate", vec![])),
    ]
}

pub fn render(out: &Outcome) -> String {
    format!("{}--- stderr\n{}--- exit {}\n", out.stdout, out.stderr, out.code)
}

/// Compares every case against its golden file; returns the mismatches.
/// With `update` set the files are rewritten instead.
pub fn golden_mismatches(update: bool) -> Vec<String> {
    let mut failures = Vec::new();
    for (name, args) in cases() {
        let got = render(&run_args(args.clone()));
        let path = Path::new("tests/golden").join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            Ok(want) => failures.push(format!("{name}:\n--- expected\n{want}--- got\n{got}")),
            Err(_) => failures.push(format!("missing {}", path.display())),
        }
    }
    failures
}

/// Subcommands without a golden case.
pub fn uncovered_commands() -> Vec<Command> {
    let covered: Vec<Command> = cases()
        .iter()
        .filter_map(|(_, a)| {
            a[0].parse::<Command>().ok().or_else(|| format!("{}-{}", a[0], a.get(1)?).parse().ok())
        })
        .collect();
    Command::ALL.into_iter().filter(|c| !covered.contains(c)).collect()
}
