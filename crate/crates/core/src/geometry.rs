//! Planar link geometry.
//!
//! Everything lives in the horizontal plane that the plane-spiral waves
//! radiate into. Boresight is the +x axis: transmit arrays sit around the
//! origin, receive arrays around `(D, 0)`, and ULAs spread along y.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wavelength in meters for a carrier in Hz.
pub fn wavelength_for(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TxLayout {
    /// Every transmit element at the origin.
    Coaxial,
    /// Uniform linear array spanning `aperture` meters across boresight.
    Ula { aperture: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tx,
    Rx,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub tx_layout: TxLayout,
    pub rx_aperture: f64,
    pub distance: f64,
    pub n_tx: usize,
    pub n_rx: usize,
    pub wavelength: f64,
}

impl LinkGeometry {
    pub fn new(
        tx_layout: TxLayout,
        rx_aperture: f64,
        distance: f64,
        n_tx: usize,
        n_rx: usize,
        wavelength: f64,
    ) -> Result<Self> {
        let geom = Self {
            tx_layout,
            rx_aperture,
            distance,
            n_tx,
            n_rx,
            wavelength,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance > 0.0 && self.distance.is_finite()) {
            return Err(invalid("distance", format!("must be > 0, got {}", self.distance)));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(invalid(
                "wavelength",
                format!("must be > 0, got {}", self.wavelength),
            ));
        }
        if !(self.rx_aperture >= 0.0 && self.rx_aperture.is_finite()) {
            return Err(invalid(
                "rx_aperture",
                format!("must be >= 0, got {}", self.rx_aperture),
            ));
        }
        if let TxLayout::Ula { aperture } = self.tx_layout {
            if !(aperture >= 0.0 && aperture.is_finite()) {
                return Err(invalid("tx_aperture", format!("must be >= 0, got {aperture}")));
            }
        }
        if self.n_tx == 0 {
            return Err(invalid("n_tx", "must be positive"));
        }
        if self.n_rx == 0 {
            return Err(invalid("n_rx", "must be positive"));
        }
        Ok(())
    }

    /// Same geometry at another boresight distance.
    pub fn at_distance(&self, distance: f64) -> Result<Self> {
        let mut geom = *self;
        geom.distance = distance;
        geom.validate()?;
        Ok(geom)
    }

    pub fn element_positions(&self, side: Side) -> Vec<Point> {
        match side {
            Side::Tx => match self.tx_layout {
                TxLayout::Coaxial => vec![Point::ORIGIN; self.n_tx],
                TxLayout::Ula { aperture } => ula_positions(self.n_tx, aperture, 0.0),
            },
            Side::Rx => ula_positions(self.n_rx, self.rx_aperture, self.distance),
        }
    }

    pub fn tx_centroid(&self) -> Point {
        Point::ORIGIN
    }

    pub fn rx_centroid(&self) -> Point {
        Point::new(self.distance, 0.0)
    }
}

/// `n` points on the line `x = x`, spanning `aperture` and centered on y = 0,
/// most-negative y first.
fn ula_positions(n: usize, aperture: f64, x: f64) -> Vec<Point> {
    if n == 1 {
        return vec![Point::new(x, 0.0)];
    }
    let spacing = aperture / (n - 1) as f64;
    let half = aperture / 2.0;
    (0..n)
        .map(|i| Point::new(x, -half + spacing * i as f64))
        .collect()
}

pub fn path_distance(p: Point, q: Point) -> f64 {
    (q.x - p.x).hypot(q.y - p.y)
}

/// Azimuth of `rx` seen from `tx`, measured from +x, in (-pi, pi].
pub fn azimuth_from_tx(tx: Point, rx: Point) -> Result<f64> {
    let dx = rx.x - tx.x;
    let dy = rx.y - tx.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::UndefinedAzimuth);
    }
    let phi = dy.atan2(dx);
    Ok(if phi <= -PI { PI } else { phi })
}

/// Near/far-field boundary `2 A^2 / lambda`.
pub fn rayleigh_distance(aperture: f64, wavelength: f64) -> f64 {
    2.0 * aperture * aperture / wavelength
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ula_rx(n_rx: usize, aperture: f64, d: f64) -> LinkGeometry {
        LinkGeometry::new(TxLayout::Coaxial, aperture, d, 2, n_rx, 0.03).unwrap()
    }

    #[test]
    fn receive_ula_two_elements() {
        let pos = ula_rx(2, 0.6, 5.0).element_positions(Side::Rx);
        assert_eq!(pos, vec![Point::new(5.0, -0.3), Point::new(5.0, 0.3)]);
    }

    #[test]
    fn coaxial_tx_all_at_origin() {
        let pos = ula_rx(2, 0.6, 5.0).element_positions(Side::Tx);
        assert_eq!(pos, vec![Point::ORIGIN, Point::ORIGIN]);
    }

    #[test]
    fn single_receiver_on_boresight() {
        let pos = ula_rx(1, 0.6, 5.0).element_positions(Side::Rx);
        assert_eq!(pos, vec![Point::new(5.0, 0.0)]);
    }

    #[test]
    fn ula_tx_span_and_order() {
        let g = LinkGeometry::new(TxLayout::Ula { aperture: 0.35 }, 0.35, 10.0, 3, 3, 0.03)
            .unwrap();
        let pos = g.element_positions(Side::Tx);
        assert_eq!(pos.len(), 3);
        assert!(pos.windows(2).all(|w| w[0].y < w[1].y));
        assert!((pos[2].y - pos[0].y - 0.35).abs() < 1e-15);
        assert!(pos.iter().all(|p| p.x == 0.0));
    }

    #[test]
    fn distances() {
        assert_eq!(path_distance(Point::ORIGIN, Point::new(5.0, 0.0)), 5.0);
        assert_eq!(path_distance(Point::ORIGIN, Point::new(3.0, 4.0)), 5.0);
        let d = path_distance(Point::ORIGIN, Point::new(5.0, 0.3));
        assert!((d - (25.09f64).sqrt()).abs() < 1e-15);
        assert!((d - 5.008_991_915).abs() < 1e-9);
    }

    #[test]
    fn azimuths() {
        assert_eq!(azimuth_from_tx(Point::ORIGIN, Point::new(5.0, 0.0)).unwrap(), 0.0);
        let up = azimuth_from_tx(Point::ORIGIN, Point::new(0.0, 1.0)).unwrap();
        assert!((up - PI / 2.0).abs() < 1e-15);
        let phi = azimuth_from_tx(Point::ORIGIN, Point::new(5.0, 0.3)).unwrap();
        assert!((phi - 0.059_928_155_9).abs() < 1e-9);
        let back = azimuth_from_tx(Point::ORIGIN, Point::new(-1.0, -0.0)).unwrap();
        assert_eq!(back, PI);
    }

    #[test]
    fn coincident_points_have_no_azimuth() {
        assert_eq!(
            azimuth_from_tx(Point::new(1.0, 2.0), Point::new(1.0, 2.0)),
            Err(Error::UndefinedAzimuth)
        );
    }

    #[test]
    fn rayleigh_reference_values() {
        let lam = 0.03;
        let a = 20.0 * lam / PI;
        assert!((rayleigh_distance(a, lam) / lam - 81.06).abs() < 0.01);
        let lam = wavelength_for(10.2e9);
        assert!((rayleigh_distance(0.85, lam) - 49.16).abs() < 0.01);
        assert!((rayleigh_distance(0.35, lam) - 8.336).abs() < 0.01);
    }

    #[test]
    fn invalid_geometry_rejected() {
        assert!(LinkGeometry::new(TxLayout::Coaxial, -0.1, 5.0, 2, 2, 0.03).is_err());
        assert!(LinkGeometry::new(TxLayout::Coaxial, 0.1, 0.0, 2, 2, 0.03).is_err());
        assert!(LinkGeometry::new(TxLayout::Coaxial, 0.1, 5.0, 2, 2, 0.0).is_err());
        assert!(LinkGeometry::new(TxLayout::Ula { aperture: -1.0 }, 0.1, 5.0, 2, 2, 0.03).is_err());
        assert!(LinkGeometry::new(TxLayout::Coaxial, 0.1, 5.0, 0, 2, 0.03).is_err());
    }
}
