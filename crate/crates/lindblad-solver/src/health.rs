//! Process-wide record of the worst physicality deviations seen at record
//! points since the last reset.

use std::sync::atomic::{AtomicU64, Ordering};

use quantum_core::Physicality;

static MAX_TRACE_DRIFT: AtomicU64 = AtomicU64::new(0);
static MAX_HERMITICITY: AtomicU64 = AtomicU64::new(0);
// Stored negated so every field is a running maximum.
static NEG_MIN_EIGENVALUE: AtomicU64 = AtomicU64::new(0);
static CHECKED: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HealthReport {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    /// Most negative eigenvalue seen, or 0 when all were non-negative.
    pub min_eigenvalue: f64,
    pub checked_states: u64,
}

fn raise(cell: &AtomicU64, value: f64) {
    let mut current = cell.load(Ordering::Relaxed);
    while value > f64::from_bits(current) {
        match cell.compare_exchange_weak(current, value.to_bits(), Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => break,
            Err(actual) => current = actual,
        }
    }
}

pub fn record(p: &Physicality) {
    raise(&MAX_TRACE_DRIFT, p.trace_error);
    raise(&MAX_HERMITICITY, p.hermiticity_error);
    raise(&NEG_MIN_EIGENVALUE, -p.min_eigenvalue);
    CHECKED.fetch_add(1, Ordering::Relaxed);
}

pub fn reset() {
    for cell in [&MAX_TRACE_DRIFT, &MAX_HERMITICITY, &NEG_MIN_EIGENVALUE, &CHECKED] {
        cell.store(0, Ordering::Relaxed);
    }
}

pub fn snapshot() -> HealthReport {
    HealthReport {
        max_trace_drift: f64::from_bits(MAX_TRACE_DRIFT.load(Ordering::Relaxed)),
        max_hermiticity_error: f64::from_bits(MAX_HERMITICITY.load(Ordering::Relaxed)),
        min_eigenvalue: -f64::from_bits(NEG_MIN_EIGENVALUE.load(Ordering::Relaxed)),
        checked_states: CHECKED.load(Ordering::Relaxed),
    }
}
