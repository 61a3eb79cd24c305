use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Classic cart-pole constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartpoleParams<T> {
    pub gravity: T,
    pub mass_cart: T,
    pub mass_pole: T,
    /// Half the pole length.
    pub length: T,
    pub force_mag: T,
    pub tau: T,
    pub theta_limit: T,
    pub x_limit: T,
    /// Horizontal force added inside a wind zone.
    pub wind: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CartState<T> {
    pub x: T,
    pub x_dot: T,
    pub theta: T,
    pub theta_dot: T,
}

impl<T: Float> CartState<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.x, self.x_dot, self.theta, self.theta_dot]
    }

    pub fn from_array([x, x_dot, theta, theta_dot]: [T; 4]) -> Self {
        CartState {
            x,
            x_dot,
            theta,
            theta_dot,
        }
    }
}

fn c<T: Float>(v: f64) -> T {
    T::from(v).expect("constant fits the scalar type")
}

impl<T: Float> CartpoleParams<T> {
    pub fn classic() -> Self {
        CartpoleParams {
            gravity: c(9.8),
            mass_cart: c(1.0),
            mass_pole: c(0.1),
            length: c(0.5),
            force_mag: c(10.0),
            tau: c(0.02),
            theta_limit: c(12.0 * 2.0 * std::f64::consts::PI / 360.0),
            x_limit: c(2.4),
            wind: c(5.0),
        }
    }

    pub fn total_mass(&self) -> T {
        self.mass_cart + self.mass_pole
    }

    fn pole_mass_length(&self) -> T {
        self.mass_pole * self.length
    }

    fn denominator(&self, theta: T) -> T {
        let cos = theta.cos();
        self.length * (c::<T>(4.0) / c(3.0) - self.mass_pole * cos * cos / self.total_mass())
    }

    /// The part of the angular acceleration contributed by gravity `g`.
    pub fn gravity_term(&self, s: &CartState<T>, g: T) -> T {
        g * s.theta.sin() / self.denominator(s.theta)
    }

    /// `(x_acc, theta_acc)` under net horizontal `force` and gravity `g`.
    pub fn accelerations(&self, s: &CartState<T>, force: T, g: T) -> (T, T) {
        let (sin, cos) = (s.theta.sin(), s.theta.cos());
        let temp =
            (force + self.pole_mass_length() * s.theta_dot * s.theta_dot * sin) / self.total_mass();
        let theta_acc = (g * sin - cos * temp) / self.denominator(s.theta);
        let x_acc = temp - self.pole_mass_length() * theta_acc * cos / self.total_mass();
        (x_acc, theta_acc)
    }

    /// One semi-implicit Euler step: velocities first, then positions with
    /// the new velocities.
    pub fn integrate(&self, s: &CartState<T>, force: T, g: T) -> CartState<T> {
        let (x_acc, theta_acc) = self.accelerations(s, force, g);
        let x_dot = s.x_dot + self.tau * x_acc;
        let theta_dot = s.theta_dot + self.tau * theta_acc;
        CartState {
            x: s.x + self.tau * x_dot,
            x_dot,
            theta: s.theta + self.tau * theta_dot,
            theta_dot,
        }
    }

    /// Pole fallen or cart off the track.
    pub fn failed(&self, s: &CartState<T>) -> bool {
        s.x.abs() > self.x_limit || s.theta.abs() > self.theta_limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_gravity_multiplier_is_identity() {
        let p = CartpoleParams::<f64>::classic();
        let s = CartState {
            x: 0.1,
            x_dot: -0.2,
            theta: 0.03,
            theta_dot: 0.4,
        };
        assert_eq!(
            p.integrate(&s, 10.0, p.gravity * 1.0),
            p.integrate(&s, 10.0, p.gravity)
        );
    }

    #[test]
    fn single_precision_tracks_double() {
        let p64 = CartpoleParams::<f64>::classic();
        let p32 = CartpoleParams::<f32>::classic();
        let mut a = CartState {
            x: 0.0,
            x_dot: 0.0,
            theta: 0.02,
            theta_dot: 0.0,
        };
        let mut b = CartState {
            x: 0.0f32,
            x_dot: 0.0,
            theta: 0.02,
            theta_dot: 0.0,
        };
        for i in 0..50 {
            let f = if i % 2 == 0 { 10.0 } else { -10.0 };
            a = p64.integrate(&a, f, p64.gravity);
            b = p32.integrate(&b, f as f32, p32.gravity);
        }
        assert!((a.theta - b.theta as f64).abs() < 1e-4);
    }
}
