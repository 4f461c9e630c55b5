//! Code templates: target text with `{placeholder}` slots that rendering
//! fills with plan parameters as literals.

use super::CodegenError;

/// Two targets ship built in: `sim`, the structured JSON document the
/// oblivious-evaluation simulator loads back (the executable round-trip
/// target), and `spdz-style`, source text in the shape such platforms
/// compile. The platform flags in the latter are emitted verbatim and
/// carry no semantics here.
#[derive(Debug, Clone, PartialEq)]
pub struct Template {
    pub target: String,
    pub text: String,
}

pub const SIM_TEMPLATE: &str = "{plan_json}\n";

pub const SPDZ_TEMPLATE: &str = r#"@types.vectorize
def {function_name}(x):
    """Piecewise polynomial approximation, format {format}, order {k},
    {m} pieces including the out-of-domain defaults.

    Args:
        x (sfix): the input secret value.
    Returns:
        sfix: secret f(x).
    """

    # In user-level mpc file:
    # probability truncation acceleration.
    program.use_trunc_pr = True
    program.use_split(3)

    # Config of piece-wise polynomial.
    breaks = {breaks}
    coeffA = {coeffA}
    scaler = {scaler}

    m = len(coeffA)
    k = len(coeffA[0])
    degree = k - 1

    # Compute the target mask.
    comp = sfix.Array(m)
    for i in range(m):
        comp[i] = (x >= breaks[i])
    cipher_index = bb.get_last_one(comp)

    # Calculate [x, x^2, ..., x^degree].
    pre_muls = floatingpoint.PreOpL(lambda a, b, _: a * b, [x] * degree)

    # Compute c_i * x^i * s_i.
    poss_res = [0] * m
    for i in range(m):
        poss_res[i] = coeffA[i][0] * scaler[i][0]
        for j in range(degree):
            poss_res[i] += coeffA[i][j + 1] * pre_muls[j] * scaler[i][j + 1]

    # Get result with mask and all possible values.
    return sfix.dot_product(cipher_index, poss_res)
"#;

impl Template {
    pub fn builtin(target: &str) -> Option<Template> {
        let text = match target {
            "sim" => SIM_TEMPLATE,
            "spdz-style" => SPDZ_TEMPLATE,
            _ => return None,
        };
        Some(Template {
            target: target.to_string(),
            text: text.to_string(),
        })
    }

    pub fn from_text(target: &str, text: &str) -> Template {
        Template {
            target: target.to_string(),
            text: text.to_string(),
        }
    }

    /// Substitute every `{name}` slot from the binding list. Deterministic
    /// byte output; an unbound placeholder is an error.
    pub fn render(&self, bindings: &[(&str, String)]) -> Result<String, CodegenError> {
        let mut out = String::with_capacity(self.text.len());
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'{' {
                if let Some(end) = placeholder_end(bytes, i) {
                    let name = &self.text[i + 1..end];
                    let value = bindings
                        .iter()
                        .find(|(n, _)| *n == name)
                        .map(|(_, v)| v)
                        .ok_or_else(|| CodegenError::Template {
                            missing: name.to_string(),
                        })?;
                    out.push_str(value);
                    i = end + 1;
                    continue;
                }
            }
            // not a placeholder: copy the raw byte (template text is ASCII
            // around placeholders; multibyte chars pass through untouched)
            let ch_len = utf8_len(bytes[i]);
            out.push_str(&self.text[i..i + ch_len]);
            i += ch_len;
        }
        Ok(out)
    }
}

/// A placeholder is `{` + identifier + `}`; anything else is literal text.
fn placeholder_end(bytes: &[u8], start: usize) -> Option<usize> {
    let mut j = start + 1;
    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
        j += 1;
    }
    if j > start + 1 && j < bytes.len() && bytes[j] == b'}' {
        Some(j)
    } else {
        None
    }
}

fn utf8_len(first: u8) -> usize {
    match first {
        0x00..=0x7F => 1,
        0xC0..=0xDF => 2,
        0xE0..=0xEF => 3,
        _ => 4,
    }
}
