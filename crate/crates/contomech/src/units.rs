//! Quantities written as `"<number> <unit>"` strings.

use std::fmt;

/// Physical dimension of a configuration value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Dimensionless,
    /// 1/s (also rad/s and Hz, without a 2π)
    Rate,
    Time,
    Length,
    Wavenumber,
    Velocity,
    Power,
    Temperature,
    Angle,
    /// coefficient of κⁿ in a dispersion polynomial, rad/s·mⁿ
    DispersionCoeff(u8),
    /// Hz·m^(p/2)
    CouplingHalf(i8),
    /// s^(-1/2), endfire amplitude
    FluxAmplitude,
    /// s^(-1/2)·m^(-1/2), side-drive amplitude
    SideAmplitude,
    /// m^(-1/2), field amplitude
    FieldAmplitude,
    /// m²/s
    Diffusivity,
}

impl Dim {
    /// The SI spelling used when writing values back out.
    pub fn canonical(self) -> String {
        match self {
            Dim::Dimensionless => String::new(),
            Dim::Rate => "/s".into(),
            Dim::Time => "s".into(),
            Dim::Length => "m".into(),
            Dim::Wavenumber => "/m".into(),
            Dim::Velocity => "m/s".into(),
            Dim::Power => "W".into(),
            Dim::Temperature => "K".into(),
            Dim::Angle => "rad".into(),
            Dim::DispersionCoeff(0) => "rad/s".into(),
            Dim::DispersionCoeff(1) => "m/s".into(),
            Dim::DispersionCoeff(n) => format!("m^{n}/s"),
            Dim::CouplingHalf(p) => format!("Hz*m^{p}/2"),
            Dim::FluxAmplitude => "s^-1/2".into(),
            Dim::SideAmplitude => "s^-1/2*m^-1/2".into(),
            Dim::FieldAmplitude => "m^-1/2".into(),
            Dim::Diffusivity => "m^2/s".into(),
        }
    }

    fn factor(self, unit: &str) -> Option<f64> {
        let prefixed = |base: &str, u: &str| -> Option<f64> {
            let p = u.strip_suffix(base)?;
            Some(match p {
                "" => 1.0,
                "k" => 1e3,
                "M" => 1e6,
                "G" => 1e9,
                "T" => 1e12,
                "m" => 1e-3,
                "u" | "µ" => 1e-6,
                "n" => 1e-9,
                "p" => 1e-12,
                "f" => 1e-15,
                "c" if base == "m" => 1e-2,
                _ => return None,
            })
        };
        match self {
            Dim::Dimensionless => unit.is_empty().then_some(1.0),
            Dim::Rate => match unit {
                "/s" | "1/s" | "rad/s" => Some(1.0),
                _ => prefixed("Hz", unit),
            },
            Dim::Time => prefixed("s", unit),
            Dim::Length => prefixed("m", unit),
            Dim::Wavenumber => match unit {
                "/m" | "1/m" | "rad/m" => Some(1.0),
                "/cm" | "1/cm" => Some(1e2),
                "/mm" | "1/mm" => Some(1e3),
                "/um" | "1/um" => Some(1e6),
                _ => None,
            },
            Dim::Velocity => match unit {
                "m/s" => Some(1.0),
                "km/s" => Some(1e3),
                _ => None,
            },
            Dim::Power => prefixed("W", unit),
            Dim::Temperature => (unit == "K").then_some(1.0),
            Dim::Angle => match unit {
                "rad" => Some(1.0),
                "deg" => Some(std::f64::consts::PI / 180.0),
                _ => None,
            },
            Dim::DispersionCoeff(n) => {
                let want = self.canonical();
                let alt = if n == 0 { "/s" } else { "" };
                (unit == want || (n == 0 && (unit == alt || unit == "1/s"))).then_some(1.0)
            }
            Dim::CouplingHalf(p) => {
                let tail = format!("*m^{p}/2");
                let head = unit.strip_suffix(&tail)?;
                match head {
                    "Hz" | "/s" | "1/s" | "rad/s" => Some(1.0),
                    _ => None,
                }
            }
            Dim::FluxAmplitude => matches!(unit, "s^-1/2" | "1/s^1/2" | "/s^1/2").then_some(1.0),
            Dim::SideAmplitude => matches!(unit, "s^-1/2*m^-1/2" | "m^-1/2*s^-1/2").then_some(1.0),
            Dim::FieldAmplitude => matches!(unit, "m^-1/2" | "1/m^1/2" | "/m^1/2").then_some(1.0),
            Dim::Diffusivity => (unit == "m^2/s").then_some(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitError(pub String);

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parse `"6.28e6 /s"` as a value of dimension `dim`, returned in SI units.
pub fn parse_quantity(text: &str, dim: Dim) -> Result<f64, UnitError> {
    let text = text.trim();
    let (num, unit) = match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => (text, ""),
    };
    let unit: String = unit.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '·' { '*' } else { c }).collect();
    let value: f64 = num.parse().map_err(|_| UnitError(format!("`{num}` is not a number")))?;
    if !value.is_finite() {
        return Err(UnitError(format!("`{num}` is not finite")));
    }
    let factor = dim.factor(&unit).ok_or_else(|| {
        if unit.is_empty() {
            UnitError(format!("missing unit (expected e.g. `{}`)", dim.canonical()))
        } else {
            UnitError(format!("unit `{unit}` does not fit (expected e.g. `{}`)", dim.canonical()))
        }
    })?;
    Ok(value * factor)
}

/// Shortest text that parses back to exactly `value`.
pub fn format_quantity(value: f64, dim: Dim) -> String {
    let u = dim.canonical();
    if u.is_empty() {
        format!("{value:e}")
    } else {
        format!("{value:e} {u}")
    }
}
