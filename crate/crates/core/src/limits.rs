//! Process-wide enumeration and LP size caps.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;
pub const DEFAULT_LP_CAP: u64 = 1 << 20;

static ENUMERATION_CAP: AtomicU64 = AtomicU64::new(DEFAULT_ENUMERATION_CAP);
static LP_CAP: AtomicU64 = AtomicU64::new(DEFAULT_LP_CAP);

pub fn enumeration_cap() -> u64 {
    ENUMERATION_CAP.load(Ordering::Relaxed)
}

pub fn set_enumeration_cap(cap: u64) {
    ENUMERATION_CAP.store(cap, Ordering::Relaxed);
}

/// Cap on `variables * constraints` for a single linear program.
pub fn lp_cap() -> u64 {
    LP_CAP.load(Ordering::Relaxed)
}

pub fn set_lp_cap(cap: u64) {
    LP_CAP.store(cap, Ordering::Relaxed);
}

pub(crate) fn check_enumeration(what: &'static str, count: u128) -> Result<()> {
    let cap = enumeration_cap();
    if count > cap as u128 {
        return Err(Error::CapExceeded { what, count, cap });
    }
    Ok(())
}

/// `2^bits` checked against the enumeration cap.
pub(crate) fn check_power_of_two(what: &'static str, bits: usize) -> Result<usize> {
    let count = if bits >= 127 {
        u128::MAX
    } else {
        1u128 << bits
    };
    check_enumeration(what, count)?;
    Ok(count as usize)
}

pub(crate) fn check_lp(what: &'static str, variables: usize, constraints: usize) -> Result<()> {
    let cap = lp_cap();
    let count = variables as u128 * constraints.max(1) as u128;
    if count > cap as u128 {
        return Err(Error::CapExceeded { what, count, cap });
    }
    Ok(())
}
