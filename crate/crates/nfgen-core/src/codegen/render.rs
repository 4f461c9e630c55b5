//! Rendering plans into target source: plan parameters become literals,
//! printed with full precision (`mantissa * 2^-f` exactly).

use crate::fitter::PiecewisePlan;
use crate::fxp::FxpValue;

use super::template::Template;
use super::CodegenError;

/// Substitute the plan into the template. Breaks, coefficients and scaling
/// factors are emitted as exact decimal literals; rendering the same plan
/// twice yields byte-identical output.
pub fn render(
    plan: &PiecewisePlan,
    template: &Template,
    name: &str,
) -> Result<String, CodegenError> {
    let bindings: Vec<(&str, String)> = vec![
        ("function_name", name.to_string()),
        ("format", plan.format().to_string()),
        ("k", plan.order().to_string()),
        ("m", plan.piece_count().to_string()),
        ("breaks", value_list(plan.breaks())),
        ("coeffA", matrix(plan, |p, i| p.coeffs()[i])),
        ("scaler", matrix(plan, |p, i| p.scalers()[i])),
        ("plan_json", plan.to_json()),
    ];
    template.render(&bindings)
}

fn value_list(values: &[FxpValue]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_decimal_string()).collect();
    format!("[{}]", items.join(", "))
}

fn matrix(
    plan: &PiecewisePlan,
    column: impl Fn(&crate::fitter::ScaledPolynomial, usize) -> FxpValue,
) -> String {
    let rows: Vec<String> = plan
        .pieces()
        .iter()
        .map(|p| {
            let row: Vec<String> = (0..=plan.order())
                .map(|i| column(p, i).to_decimal_string())
                .collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(",\n        "))
}
