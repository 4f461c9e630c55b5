//! Mock 3-party additive sharing over the ring `2^n`. Arithmetic fidelity
//! only; the trace, not the protocol, is the security-relevant artifact.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fxp::{FxpFormat, FxpValue};

/// Three ring elements modulo `2^n` summing to the mantissa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareTriple {
    shares: [u128; 3],
    format: FxpFormat,
}

impl ShareTriple {
    pub fn shares(&self) -> &[u128; 3] {
        &self.shares
    }

    pub fn format(&self) -> FxpFormat {
        self.format
    }
}

fn ring_mask(format: FxpFormat) -> u128 {
    if format.n() == 128 {
        u128::MAX
    } else {
        (1u128 << format.n()) - 1
    }
}

/// Split a value into three additive shares from a seeded generator.
pub fn share(value: FxpValue, seed: u64) -> ShareTriple {
    share_with_rng(value, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn share_with_rng(value: FxpValue, rng: &mut ChaCha8Rng) -> ShareTriple {
    let format = value.format();
    let mask = ring_mask(format);
    let target = (value.mantissa() as u128) & mask;
    let r1 = random_ring(rng, mask);
    let r2 = random_ring(rng, mask);
    let r3 = target.wrapping_sub(r1).wrapping_sub(r2) & mask;
    ShareTriple {
        shares: [r1, r2, r3],
        format,
    }
}

fn random_ring(rng: &mut ChaCha8Rng, mask: u128) -> u128 {
    let hi = (rng.next_u64() as u128) << 64;
    (hi | rng.next_u64() as u128) & mask
}

/// Sum the shares modulo `2^n` and map the two's-complement pattern back to
/// a signed mantissa. Exact for every representable value.
pub fn reconstruct(triple: &ShareTriple) -> FxpValue {
    let format = triple.format;
    let mask = ring_mask(format);
    let sum = triple
        .shares
        .iter()
        .fold(0u128, |acc, s| acc.wrapping_add(*s))
        & mask;
    let half = 1u128 << (format.n() - 1);
    let mantissa = if format.n() == 128 {
        sum as i128
    } else if sum >= half {
        // two's-complement reinterpretation of sum - 2^n
        sum.wrapping_sub(1u128 << format.n()) as i128
    } else {
        sum as i128
    };
    FxpValue::from_mantissa(mantissa, format).unwrap_or_else(|_| {
        // a reconstruction of -2^(n-1) cannot come from a representable
        // value; saturate like the simulator arithmetic does
        FxpValue::min_representable(format)
    })
}
