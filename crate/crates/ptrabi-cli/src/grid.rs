//! Curve-grid evaluation, optionally spread over worker threads. Each grid
//! column is an independent exact slice solve; branch assignment afterwards
//! is sequential by construction, so the thread split lives here in the
//! binary and the library stays single-threaded.

use ptrabi_core::spectrum::{self, CurvePoint, RootMethod};
use ptrabi_core::{constraint, Error};

pub fn trace(n: u32, g_max: f64, samples: u32, threads: u32) -> Result<Vec<CurvePoint>, Error> {
    if threads <= 1 {
        return spectrum::trace_curves(n, g_max, samples);
    }
    if !(g_max.is_finite() && g_max > 0.0) {
        return Err(Error::Precondition(format!(
            "gMax must be finite and positive, got {g_max}"
        )));
    }
    if samples < 2 {
        return Err(Error::Precondition(format!("samples must be at least 2, got {samples}")));
    }
    let poly = constraint::constraint_polynomial(n);
    // Contiguous index ranges; the grid formula must match the sequential
    // path exactly so --threads never changes the output bytes.
    let chunk = samples.div_ceil(threads);
    let results: Vec<Result<Vec<(f64, Vec<f64>)>, Error>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = samples.min(lo + chunk);
            if lo >= hi {
                break;
            }
            let poly = &poly;
            handles.push(scope.spawn(move || {
                (lo..hi)
                    .map(|i| {
                        let g = g_max * i as f64 / (samples - 1) as f64;
                        Ok((g, spectrum::slice_roots_in_x(poly, g, RootMethod::default())?))
                    })
                    .collect()
            }));
        }
        handles.into_iter().map(|h| h.join().expect("grid worker panicked")).collect()
    });
    let mut columns = Vec::with_capacity(samples as usize);
    for r in results {
        columns.extend(r?);
    }
    Ok(spectrum::assign_branches(&columns))
}
