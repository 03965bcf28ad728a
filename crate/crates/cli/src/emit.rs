//! Stable serialization: JSON with floats at 15 significant digits, CSV for
//! tables. Identical inputs produce identical bytes.

use periodic_dirichlet::counting::DensityRow;
use periodic_dirichlet::decomposition::PrimitiveComponent;
use periodic_dirichlet::offzero::DemoReport;
use serde::Serialize;

/// serde_json formatter writing every float as d.dddddddddddddde±x
/// (15 significant digits).
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        write!(w, "{}", fmt_f64(value as f64))
    }
}

/// 15 significant digits in scientific notation; exact zero stays "0.0".
pub fn fmt_f64(value: f64) -> String {
    if value == 0.0 {
        "0.0".to_string()
    } else {
        format!("{value:.14e}")
    }
}

pub fn to_json_value<T: Serialize>(value: &T) -> Result<String, super::CliError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| super::CliError::Other(e.to_string()))?;
    Ok(String::from_utf8(out).expect("serializer emits UTF-8"))
}

pub fn to_json(value: &serde_json::Value) -> String {
    to_json_value(value).expect("serde_json::Value serializes")
}

/// `{"components": [{"conductor": m, "psi_label": [...], "poly": {"1": [re,im], ...}}]}`
pub fn decomposition_json(comps: &[PrimitiveComponent]) -> String {
    let components: Vec<serde_json::Value> = comps
        .iter()
        .map(|c| {
            let poly: serde_json::Map<String, serde_json::Value> = c
                .poly
                .terms()
                .map(|(k, coeff)| {
                    (
                        k.to_string(),
                        serde_json::json!([coeff.re, coeff.im]),
                    )
                })
                .collect();
            serde_json::json!({
                "conductor": c.psi.conductor,
                "psi_label": c.psi.inducer.label(),
                "poly": poly,
            })
        })
        .collect();
    to_json(&serde_json::json!({ "components": components }))
}

/// CSV rows "T,N,Nprime,N_over_T" with a header.
pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut out = String::from("T,N,Nprime,N_over_T\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.t,
            r.count,
            r.distinct,
            fmt_f64(r.per_unit)
        ));
    }
    out
}

/// Certificates under the wire names {"t","center","radius","gamma",
/// "maxDiff","zeros"}, plus the structured failure when nothing certified.
pub fn demo_json(report: &DemoReport, seed: u64) -> String {
    let certificates: Vec<serde_json::Value> = report
        .certificates
        .iter()
        .map(|c| {
            serde_json::json!({
                "t": c.t,
                "center": c.center,
                "radius": c.radius,
                "gamma": c.gamma,
                "maxDiff": c.max_diff,
                "zeros": c.zeros_inside,
            })
        })
        .collect();
    let failure = report.failure.as_ref().map(|f| {
        serde_json::json!({
            "stage": format!("{:?}", f.stage),
            "message": f.message,
            "required": f.required,
            "attainable": f.attainable,
        })
    });
    to_json(&serde_json::json!({
        "certificates": certificates,
        "failure": failure,
        "windowsScanned": report.windows_scanned,
        "tBudget": report.t_budget,
        "density": report.density,
        "seed": seed,
    }))
}
