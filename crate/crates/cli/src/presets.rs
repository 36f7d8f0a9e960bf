//! Scenario files bundled with the binary.

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! preset {
    ($name:literal) => {
        Preset {
            name: $name,
            text: include_str!(concat!("../presets/", $name, ".cfg")),
        }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("suite_gs"),
    preset!("suite_gsinf"),
    preset!("delta_table"),
    preset!("oscillatory_fourier"),
    preset!("null_checks"),
    preset!("taylor_bound"),
    preset!("affine_scale"),
    preset!("half_line"),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    let name = name.strip_suffix(".cfg").unwrap_or(name);
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// The `description` line of the file.
    pub fn description(&self) -> &'static str {
        self.text
            .lines()
            .find_map(|l| l.strip_prefix("description = "))
            .map(|d| d.trim_matches('"'))
            .unwrap_or("")
    }
}

/// One line per preset: name and description.
pub fn listing() -> String {
    let width = PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
    PRESETS
        .iter()
        .map(|p| format!("{:<width$}  {}\n", p.name, p.description()))
        .collect()
}
