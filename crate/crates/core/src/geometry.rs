//! Axis-aligned page boxes in the two formats the harness deals with.
//!
//! Boxes are abstract rectangles in whatever coordinate space the annotation
//! file uses. Nothing here assumes a y-axis direction; comparisons only ever
//! happen between boxes taken from the same page space.

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};

/// Center-based COCO-style box: `[x_center, y_center, width, height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCoco {
    pub x_center: f64,
    pub y_center: f64,
    pub width: f64,
    pub height: f64,
}

impl BoxCoco {
    pub fn new(x_center: f64, y_center: f64, width: f64, height: f64) -> Result<Self> {
        let all = [x_center, y_center, width, height];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(EvalError::schema("box", "non-finite coordinate"));
        }
        if width < 0.0 || height < 0.0 {
            return Err(EvalError::schema(
                "box",
                format!("negative extent (width {width}, height {height})"),
            ));
        }
        Ok(Self {
            x_center,
            y_center,
            width,
            height,
        })
    }

    /// Builds a box from the `[x, y, width, height]` layout where `(x, y)` is
    /// the top-left corner, as stored in DocLayNet files.
    pub fn from_top_left(x: f64, y: f64, width: f64, height: f64) -> Result<Self> {
        Self::new(x + width / 2.0, y + height / 2.0, width, height)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

/// Corner-based Pascal VOC box: `[x_min, y_min, x_max, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxPascal {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl BoxPascal {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        let all = [x_min, y_min, x_max, y_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(EvalError::schema("bbox", "non-finite coordinate"));
        }
        if x_min > x_max || y_min > y_max {
            return Err(EvalError::schema(
                "bbox",
                format!("inverted corners [{x_min}, {y_min}, {x_max}, {y_max}]"),
            ));
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x_min, self.y_min, self.x_max, self.y_max]
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Area of the overlap with `other`; zero when the boxes only touch or
    /// are disjoint.
    pub fn intersection_area(&self, other: &BoxPascal) -> f64 {
        let w = self.x_max.min(other.x_max) - self.x_min.max(other.x_min);
        let h = self.y_max.min(other.y_max) - self.y_min.max(other.y_min);
        if w <= 0.0 || h <= 0.0 {
            0.0
        } else {
            w * h
        }
    }
}

/// `[x_c, y_c, w, h] -> [x_c - w/2, y_c - h/2, x_c + w/2, y_c + h/2]`.
pub fn coco_to_pascal(b: BoxCoco) -> BoxPascal {
    let hw = b.width / 2.0;
    let hh = b.height / 2.0;
    BoxPascal {
        x_min: b.x_center - hw,
        y_min: b.y_center - hh,
        x_max: b.x_center + hw,
        y_max: b.y_center + hh,
    }
}
