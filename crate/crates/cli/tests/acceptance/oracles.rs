//! Independent brute-force reference implementations for the transform
//! library, written directly from the operation definitions. They share no
//! code with the library: date math is done with civil-from-days counting
//! instead of a calendar crate, and the n-th difference uses the binomial
//! expansion instead of iterated subtraction.

/// Trailing-window mean over finite values; NaN during warm-up and for
/// windows with no finite values.
pub fn rolling_mean(x: &[f64], window: usize) -> Vec<f64> {
    (0..x.len())
        .map(|t| {
            if t + 1 < window {
                return f64::NAN;
            }
            let mut sum = 0.0;
            let mut count = 0usize;
            for &v in &x[t + 1 - window..=t] {
                if v.is_finite() {
                    sum += v;
                    count += 1;
                }
            }
            if count == 0 {
                f64::NAN
            } else {
                sum / count as f64
            }
        })
        .collect()
}

pub fn change_direction(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|t| {
            if t == 0 {
                return f64::NAN;
            }
            let delta = x[t] - x[t - 1];
            if delta.is_nan() {
                f64::NAN
            } else if delta.abs() < 1e-12 {
                0.0
            } else if delta > 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

pub fn clock_shift(x: &[f64], shift: i64) -> Vec<f64> {
    let n = x.len() as i64;
    (0..n)
        .map(|t| {
            let src = t - shift;
            if src >= 0 && src < n {
                x[src as usize]
            } else {
                f64::NAN
            }
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut result = 1.0f64;
    for i in 0..k {
        result = result * (n - i) as f64 / (i + 1) as f64;
    }
    result
}

/// n-th difference via the binomial expansion: a different algebraic route
/// than repeated first differences.
pub fn differentiate(x: &[f64], order: usize) -> Vec<f64> {
    (0..x.len())
        .map(|t| {
            if t < order {
                return f64::NAN;
            }
            let mut acc = 0.0;
            for j in 0..=order {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binomial(order, j) * x[t - j];
            }
            acc
        })
        .collect()
}

pub fn interpolate(x: &[f64], stamps: &[i64]) -> Option<Vec<f64>> {
    if !x.iter().any(|v| v.is_finite()) {
        return None;
    }
    let out = (0..x.len())
        .map(|t| {
            if x[t].is_finite() {
                return x[t];
            }
            let before = (0..t).rev().find(|&i| x[i].is_finite());
            let after = (t + 1..x.len()).find(|&i| x[i].is_finite());
            match (before, after) {
                (Some(lo), Some(hi)) => {
                    let w = (stamps[t] - stamps[lo]) as f64 / (stamps[hi] - stamps[lo]) as f64;
                    x[lo] + (x[hi] - x[lo]) * w
                }
                (Some(lo), None) => x[lo],
                (None, Some(hi)) => x[hi],
                (None, None) => unreachable!("a finite value exists"),
            }
        })
        .collect();
    Some(out)
}

pub fn missing_mask(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| if v.is_nan() { 1.0 } else { 0.0 }).collect()
}

pub enum ResampleMode {
    Mean,
    Sum,
    Min,
    Max,
    Forward,
    Linear,
}

/// Resampling of an equidistant series; returns (stamps, values).
pub fn resample(
    x: &[f64],
    stamps: &[i64],
    input_step: i64,
    target_step: i64,
    mode: &ResampleMode,
) -> (Vec<i64>, Vec<f64>) {
    let first = stamps[0];
    if target_step == input_step {
        return (stamps.to_vec(), x.to_vec());
    }
    if target_step > input_step {
        let per = (target_step / input_step) as usize;
        let buckets = (stamps[stamps.len() - 1] - first) as usize / target_step as usize + 1;
        let mut out_ts = Vec::with_capacity(buckets);
        let mut out_v = Vec::with_capacity(buckets);
        for b in 0..buckets {
            out_ts.push(first + (b as i64) * target_step);
            let lo = b * per;
            let hi = ((b + 1) * per).min(x.len());
            let finite: Vec<f64> = x[lo..hi].iter().copied().filter(|v| v.is_finite()).collect();
            out_v.push(if finite.is_empty() {
                f64::NAN
            } else {
                match mode {
                    ResampleMode::Mean => finite.iter().sum::<f64>() / finite.len() as f64,
                    ResampleMode::Sum => finite.iter().sum(),
                    ResampleMode::Min => finite.iter().copied().fold(f64::INFINITY, f64::min),
                    ResampleMode::Max => finite.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    _ => panic!("fill mode on a downsample"),
                }
            });
        }
        (out_ts, out_v)
    } else {
        let per = (input_step / target_step) as usize;
        let out_len = x.len() * per;
        let mut out_ts = Vec::with_capacity(out_len);
        let mut out_v = Vec::with_capacity(out_len);
        for (i, &v) in x.iter().enumerate() {
            for sub in 0..per {
                out_ts.push(first + (i * per + sub) as i64 * target_step);
                out_v.push(match mode {
                    ResampleMode::Forward => v,
                    ResampleMode::Linear => {
                        if sub == 0 {
                            v
                        } else if i + 1 < x.len() {
                            let frac = sub as f64 / per as f64;
                            v + (x[i + 1] - v) * frac
                        } else {
                            v
                        }
                    }
                    _ => panic!("aggregation mode on an upsample"),
                });
            }
        }
        (out_ts, out_v)
    }
}

pub fn rmse(y: &[f64], y_hat: &[f64]) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (&a, &b) in y.iter().zip(y_hat) {
        if a.is_finite() && b.is_finite() {
            sum += (a - b) * (a - b);
            count += 1;
        }
    }
    (count > 0).then(|| (sum / count as f64).sqrt())
}

/// Supervised framing rows with zero padding before the series start.
pub fn sample(x: &[f64], size: usize) -> Vec<Vec<f64>> {
    (0..x.len())
        .map(|t| {
            (0..size)
                .map(|slot| {
                    let offset = size - 1 - slot;
                    if t >= offset {
                        x[t - offset]
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Lag stack: column i at time t is x[t - (i+1) * period].
pub fn trend(x: &[f64], period: usize, repetitions: usize) -> Vec<Vec<f64>> {
    (0..x.len())
        .map(|t| {
            (0..repetitions)
                .map(|i| {
                    let offset = (i + 1) * period;
                    if t >= offset {
                        x[t - offset]
                    } else {
                        f64::NAN
                    }
                })
                .collect()
        })
        .collect()
}

/// Calendar facts from day counting alone (no calendar library):
/// civil-from-days for year/month/day, the epoch-weekday offset for the
/// weekday, and modular arithmetic for the hour.
pub struct CalendarFacts {
    pub year: f64,
    pub month: f64,
    pub day: f64,
    pub weekday: f64,
    pub hour: f64,
    pub is_weekend: f64,
    pub is_holiday: f64,
}

pub fn calendar(ts: i64, holidays: &[(u32, u32)]) -> CalendarFacts {
    let days = ts.div_euclid(86_400);
    let secs_of_day = ts.rem_euclid(86_400);
    let (year, month, day) = civil_from_days(days);
    // 1970-01-01 was a Thursday; Monday is weekday 0.
    let weekday = (days + 3).rem_euclid(7);
    let is_weekend = if weekday >= 5 { 1.0 } else { 0.0 };
    let is_holiday = if holidays.contains(&(month, day)) {
        1.0
    } else {
        0.0
    };
    CalendarFacts {
        year: year as f64,
        month: f64::from(month),
        day: f64::from(day),
        weekday: weekday as f64,
        hour: (secs_of_day / 3600) as f64,
        is_weekend,
        is_holiday,
    }
}

fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1_460 + doe / 36_524 - doe / 146_096) / 365;
    let year = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let month = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if month <= 2 { year + 1 } else { year }, month, day)
}
