/// `C_{E,p} = (ln(p+1)/ln p - 1)^{-1}`.
pub fn c_e(p: u32) -> f64 {
    let p = p as f64;
    1.0 / ((p + 1.0).ln() / p.ln() - 1.0)
}

/// `C_{I,p} = 6 C_{E,p}`.
pub fn c_i(p: u32) -> f64 {
    6.0 * c_e(p)
}

/// Thresholds of the Delayer strategy for an instance of code distance `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyParams {
    pub tau: usize,
    pub tau0: usize,
    pub s_max: usize,
    pub c_e: f64,
    pub c_i: f64,
}

impl StrategyParams {
    /// `tau = ceil(d^0.8)`, `tau0 = ceil(d^0.6)`, `s_max = floor(0.5 C_I^{-1/3} d^0.2)`.
    pub fn for_distance(p: u32, d: usize) -> Self {
        let df = d as f64;
        let c_e = c_e(p);
        let c_i = 6.0 * c_e;
        // guard against powers like 32^0.8 landing a hair above an integer
        let up = |x: f64| (x - 1e-9).ceil().max(0.0) as usize;
        let tau = up(df.powf(0.8)).max(1);
        let tau0 = up(df.powf(0.6)).clamp(1, tau);
        let s_max = (0.5 * c_i.powf(-1.0 / 3.0) * df.powf(0.2)).floor() as usize;
        StrategyParams {
            tau,
            tau0,
            s_max,
            c_e,
            c_i,
        }
    }

    pub fn with_tau(mut self, tau: usize) -> Self {
        self.tau = tau.max(1);
        self.tau0 = self.tau0.min(self.tau);
        self
    }

    pub fn with_tau0(mut self, tau0: usize) -> Self {
        self.tau0 = tau0.clamp(1, self.tau);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((c_e(5) - 8.827).abs() < 1e-3);
        assert!((c_e(7) - 14.57).abs() < 1e-2);
        assert!((c_i(5) - 6.0 * c_e(5)).abs() < 1e-12);
    }

    #[test]
    fn thresholds() {
        let s = StrategyParams::for_distance(5, 2);
        assert_eq!(s.tau, 2);
        assert_eq!(s.tau0, 2);
        let s = StrategyParams::for_distance(7, 32);
        assert_eq!(s.tau, 16);
        assert_eq!(s.tau0, 8);
        assert_eq!(s.s_max, 0);
        assert!(s.tau >= s.tau0 && s.tau0 >= 1);
    }
}
