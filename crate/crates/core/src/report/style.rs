use serde::{Deserialize, Serialize};

pub const LOW_COLOR: &str = "#0000FF";
pub const HIGH_COLOR: &str = "#FF0000";

/// Which end of the clinical-rate scale is drawn blue.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorDirection {
    /// Rate 0 is blue, the maximum observed rate red.
    #[default]
    BlueLowRedHigh,
    RedLowBlueHigh,
}

/// What a node's drawn size encodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeBy {
    /// Citations received from inside the network.
    #[default]
    InDegree,
    /// `times_cited_global` from the source records.
    GlobalCitations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeStyle {
    pub id: String,
    pub color: String,
    pub x: f64,
    pub y: f64,
    pub size: f64,
}

fn round_half_up(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Linear blend between blue and red, scaled so that `max_rate` maps to the
/// far end. Components round half up, so the midpoint is `#800080`.
pub fn rate_color(rate: f64, max_rate: f64, direction: ColorDirection) -> String {
    let t = if max_rate > 0.0 {
        (rate / max_rate).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let t = match direction {
        ColorDirection::BlueLowRedHigh => t,
        ColorDirection::RedLowBlueHigh => 1.0 - t,
    };
    let red = round_half_up(255.0 * t);
    let blue = round_half_up(255.0 * (1.0 - t));
    format!("#{red:02X}00{blue:02X}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_midpoint() {
        let d = ColorDirection::BlueLowRedHigh;
        assert_eq!(rate_color(0.0, 0.278, d), LOW_COLOR);
        assert_eq!(rate_color(0.278, 0.278, d), HIGH_COLOR);
        assert_eq!(rate_color(0.25, 0.5, d), "#800080");
        assert_eq!(rate_color(0.0, 0.0, d), LOW_COLOR);
    }

    #[test]
    fn flipped_direction() {
        let d = ColorDirection::RedLowBlueHigh;
        assert_eq!(rate_color(0.0, 0.4, d), HIGH_COLOR);
        assert_eq!(rate_color(0.4, 0.4, d), LOW_COLOR);
    }
}
