//! Static line plots of a run series.
//!
//! One horizontal panel per recorded column (energy, monitors, constraints)
//! against time, top to bottom in CSV column order. Each panel is scaled to
//! its own range, so the plot shows shape only; values live in the CSV.

use std::path::Path;

use hamcouple::dynamics::Series;
use image::{Rgb, RgbImage};

const WIDTH: u32 = 900;
const PANEL: u32 = 140;
const MARGIN: u32 = 12;

const COLORS: [[u8; 3]; 6] = [
    [31, 119, 180],
    [214, 39, 40],
    [44, 160, 44],
    [148, 103, 189],
    [255, 127, 14],
    [23, 190, 207],
];

fn line(img: &mut RgbImage, (x0, y0): (f64, f64), (x1, y1): (f64, f64), color: Rgb<u8>) {
    let n = (x1 - x0).abs().max((y1 - y0).abs()).ceil().max(1.0) as usize;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        if x >= 0.0 && y >= 0.0 && (x as u32) < img.width() && (y as u32) < img.height() {
            img.put_pixel(x as u32, y as u32, color);
        }
    }
}

fn frame(img: &mut RgbImage, top: u32) {
    let grey = Rgb([160, 160, 160]);
    let (l, r) = (MARGIN as f64, (WIDTH - MARGIN) as f64);
    let (t, b) = ((top + MARGIN) as f64, (top + PANEL - MARGIN) as f64);
    line(img, (l, t), (r, t), grey);
    line(img, (l, b), (r, b), grey);
    line(img, (l, t), (l, b), grey);
    line(img, (r, t), (r, b), grey);
}

/// Renders every column after `time` into a stacked PNG.
pub fn render(series: &Series, path: &Path) -> Result<(), image::ImageError> {
    let names: Vec<&String> = series.columns.iter().skip(2).collect();
    let height = PANEL * names.len().max(1) as u32;
    let mut img = RgbImage::from_pixel(WIDTH, height, Rgb([255, 255, 255]));
    let time = series.column("time").unwrap_or_default();
    let (t0, t1) = (
        time.first().copied().unwrap_or(0.0),
        time.last().copied().unwrap_or(1.0),
    );
    let span = if t1 > t0 { t1 - t0 } else { 1.0 };
    for (p, name) in names.iter().enumerate() {
        let top = p as u32 * PANEL;
        frame(&mut img, top);
        let vals = series.column(name).unwrap_or_default();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inner = (PANEL - 4 * MARGIN) as f64;
        let y = |v: f64| {
            let frac = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
            (top + PANEL - 2 * MARGIN) as f64 - frac * inner
        };
        let x = |t: f64| MARGIN as f64 + (t - t0) / span * (WIDTH - 2 * MARGIN) as f64;
        let color = Rgb(COLORS[p % COLORS.len()]);
        for w in time.iter().zip(&vals).collect::<Vec<_>>().windows(2) {
            line(&mut img, (x(*w[0].0), y(*w[0].1)), (x(*w[1].0), y(*w[1].1)), color);
        }
    }
    img.save(path)
}
