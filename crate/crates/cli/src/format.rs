//! Fixed, locale-free number formatting for every CSV the tool writes.

use czphc_core::constants::RAD_S_TO_GHZ;

/// 17 significant digits in scientific notation, enough to round-trip.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Angular frequency in rad/s to ordinary frequency in GHz.
pub fn ghz(omega: f64) -> String {
    float(omega * RAD_S_TO_GHZ)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, -2.0 / 3.0, 1.234_567_890_123_456_7e15, 5e-324, 0.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(1.5), "1.5000000000000000e0");
    }
}
