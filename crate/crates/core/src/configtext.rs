//! Plain-text run configuration: one `KEY VALUE` pair per line, uppercase
//! keys, `#` comments, durations with an `S` (seconds) or `M` (minutes)
//! suffix. [`render_config`] emits the canonical form; `parse_config`
//! accepts anything `render_config` produces, so the two round-trip.

use crate::config::{BehaviorProfile, ConfigError, FlowLocality, SimConfig};
use crate::reputation::{LbpFunction, PunishmentConfig};

/// Parse a configuration file body. Unknown keys and unparsable values are
/// errors carrying the 1-based line number; keys not mentioned keep their
/// defaults.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut cfg = SimConfig::default();
    apply_config(&mut cfg, text)?;
    Ok(cfg)
}

/// Apply a `KEY VALUE` document on top of an existing configuration, for
/// layered sources (defaults, then a file, then command-line overrides).
/// Same grammar and errors as [`parse_config`].
pub fn apply_config(cfg: &mut SimConfig, text: &str) -> Result<(), ConfigError> {
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (line, ""),
        };
        apply_key(cfg, key, value).map_err(|kind| match kind {
            KeyError::Unknown => ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            },
            KeyError::BadValue => ConfigError::MalformedValue {
                line: line_no,
                key: key.to_string(),
                value: value.to_string(),
            },
        })?;
    }
    Ok(())
}

/// Render a configuration as file text that parses back to an equal value.
pub fn render_config(cfg: &SimConfig) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push(' ');
        out.push_str(&v);
        out.push('\n');
    };
    kv("SIMULATION-TIME", format!("{}S", cfg.sim_time_s));
    kv(
        "TERRAIN-DIMENSIONS",
        format!("({}, {})", cfg.terrain.0, cfg.terrain.1),
    );
    kv("NUMBER-OF-NODES", cfg.node_count.to_string());
    kv("NODE-PLACEMENT", "GRID".into());
    kv("MOBILITY", "RANDOM-WAYPOINT".into());
    kv("MOBILITY-WP-PAUSE", format!("{}S", cfg.pause_s));
    kv("MOBILITY-WP-MIN-SPEED", cfg.v_min.to_string());
    kv("MOBILITY-WP-MAX-SPEED", cfg.v_max.to_string());
    kv(
        "MOBILITY-POSITION-GRANULARITY",
        cfg.granularity_m.to_string(),
    );
    kv(
        "PROMISCUOUS-MODE",
        if cfg.promiscuous { "YES" } else { "NO" }.into(),
    );
    kv("ROUTING-PROTOCOL", "DSR".into());
    kv("RADIO-RANGE", cfg.radio_range_m.to_string());
    kv("VARIANT", cfg.variant.to_string());
    kv("SELFISH-FRACTION", cfg.selfish_fraction.to_string());
    kv("SELFISH-DROP-PROB", cfg.selfish.data_drop_prob.to_string());
    kv("GRADE-THRESHOLD", cfg.grade_threshold.to_string());
    kv("PROTECTED-WINDOW", format!("{}S", cfg.protected_window_s));
    kv("NORMAL-WINDOW", format!("{}S", cfg.normal_window_s));
    kv("GROUP-COUNT", cfg.group_count.to_string());
    kv(
        "LBP-FUNCTION",
        match cfg.punishment.lbp_function {
            LbpFunction::Linear => "LINEAR",
            LbpFunction::Exponential => "EXPONENTIAL",
        }
        .into(),
    );
    kv("FLOW-COUNT", cfg.flow_count.to_string());
    kv("PACKET-INTERVAL", format!("{}S", cfg.packet_interval_s));
    kv("PACKET-SIZE", cfg.packet_size_bytes.to_string());
    kv(
        "FLOW-LOCALITY",
        match cfg.flow_locality {
            FlowLocality::Any => "ANY",
            FlowLocality::IntraGroup => "INTRA-GROUP",
        }
        .into(),
    );
    kv("FORWARD-TIMEOUT", format!("{}S", cfg.forward_timeout_s));
    kv("SEED", cfg.seed.to_string());
    out
}

enum KeyError {
    Unknown,
    BadValue,
}

fn apply_key(cfg: &mut SimConfig, key: &str, value: &str) -> Result<(), KeyError> {
    fn bad<E>(_: E) -> KeyError {
        KeyError::BadValue
    }
    match key {
        "SIMULATION-TIME" => cfg.sim_time_s = duration_s(value)?,
        "TERRAIN-DIMENSIONS" => cfg.terrain = pair(value)?,
        "NUMBER-OF-NODES" => cfg.node_count = value.parse().map_err(bad)?,
        "NODE-PLACEMENT" => {
            if !value.eq_ignore_ascii_case("GRID") {
                return Err(KeyError::BadValue);
            }
        }
        "MOBILITY" => match value.to_ascii_uppercase().as_str() {
            "RANDOM-WAYPOINT" => {}
            "NONE" => {
                cfg.v_min = 0.0;
                cfg.v_max = 0.0;
            }
            _ => return Err(KeyError::BadValue),
        },
        "MOBILITY-WP-PAUSE" => cfg.pause_s = duration_s(value)?,
        "MOBILITY-WP-MIN-SPEED" => cfg.v_min = value.parse().map_err(bad)?,
        "MOBILITY-WP-MAX-SPEED" => cfg.v_max = value.parse().map_err(bad)?,
        "MOBILITY-POSITION-GRANULARITY" => cfg.granularity_m = value.parse().map_err(bad)?,
        "PROMISCUOUS-MODE" => cfg.promiscuous = yes_no(value)?,
        "ROUTING-PROTOCOL" => {
            if !value.eq_ignore_ascii_case("DSR") {
                return Err(KeyError::BadValue);
            }
        }
        "RADIO-RANGE" => cfg.radio_range_m = value.parse().map_err(bad)?,
        "VARIANT" => cfg.variant = value.parse().map_err(|_| KeyError::BadValue)?,
        "SELFISH-FRACTION" => cfg.selfish_fraction = value.parse().map_err(bad)?,
        "SELFISH-DROP-PROB" => {
            cfg.selfish = BehaviorProfile {
                data_drop_prob: value.parse().map_err(bad)?,
                ..cfg.selfish
            }
        }
        "GRADE-THRESHOLD" => cfg.grade_threshold = value.parse().map_err(bad)?,
        "PROTECTED-WINDOW" => cfg.protected_window_s = duration_s(value)?,
        "NORMAL-WINDOW" => cfg.normal_window_s = duration_s(value)?,
        "GROUP-COUNT" => cfg.group_count = value.parse().map_err(bad)?,
        "LBP-FUNCTION" => {
            cfg.punishment = PunishmentConfig {
                lbp_function: match value.to_ascii_uppercase().as_str() {
                    "LINEAR" => LbpFunction::Linear,
                    "EXPONENTIAL" => LbpFunction::Exponential,
                    _ => return Err(KeyError::BadValue),
                },
                ..cfg.punishment
            }
        }
        "FLOW-COUNT" => cfg.flow_count = value.parse().map_err(bad)?,
        "PACKET-INTERVAL" => cfg.packet_interval_s = duration_s(value)?,
        "PACKET-SIZE" => cfg.packet_size_bytes = value.parse().map_err(bad)?,
        "FLOW-LOCALITY" => {
            cfg.flow_locality = match value.to_ascii_uppercase().as_str() {
                "ANY" => FlowLocality::Any,
                "INTRA-GROUP" => FlowLocality::IntraGroup,
                _ => return Err(KeyError::BadValue),
            }
        }
        "FORWARD-TIMEOUT" => cfg.forward_timeout_s = duration_s(value)?,
        "SEED" => cfg.seed = value.parse().map_err(bad)?,
        _ => return Err(KeyError::Unknown),
    }
    Ok(())
}

/// `"900S"` → 900, `"15M"` → 900, bare `"900"` → 900 (seconds implied).
fn duration_s(value: &str) -> Result<f64, KeyError> {
    let v = value.trim();
    let (num, scale) = if let Some(rest) = v.strip_suffix(['S', 's']) {
        (rest, 1.0)
    } else if let Some(rest) = v.strip_suffix(['M', 'm']) {
        (rest, 60.0)
    } else {
        (v, 1.0)
    };
    let n: f64 = num.trim().parse().map_err(|_| KeyError::BadValue)?;
    if !n.is_finite() || n < 0.0 {
        return Err(KeyError::BadValue);
    }
    Ok(n * scale)
}

/// `"(1250, 1250)"` → (1250.0, 1250.0).
fn pair(value: &str) -> Result<(f64, f64), KeyError> {
    let inner = value
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or(KeyError::BadValue)?;
    let (a, b) = inner.split_once(',').ok_or(KeyError::BadValue)?;
    Ok((
        a.trim().parse().map_err(|_| KeyError::BadValue)?,
        b.trim().parse().map_err(|_| KeyError::BadValue)?,
    ))
}

fn yes_no(value: &str) -> Result<bool, KeyError> {
    match value.to_ascii_uppercase().as_str() {
        "YES" => Ok(true),
        "NO" => Ok(false),
        _ => Err(KeyError::BadValue),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Variant;

    #[test]
    fn minutes_suffix_scales_to_seconds() {
        let cfg = parse_config("SIMULATION-TIME 15M\n").unwrap();
        assert_eq!(cfg.sim_time_s, 900.0);
        let cfg = parse_config("SIMULATION-TIME 900S\n").unwrap();
        assert_eq!(cfg.sim_time_s, 900.0);
        let cfg = parse_config("PACKET-INTERVAL 0.25S\n").unwrap();
        assert_eq!(cfg.packet_interval_s, 0.25);
    }

    #[test]
    fn empty_input_yields_the_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, SimConfig::default());
        let cfg = parse_config("# nothing but a comment\n\n").unwrap();
        assert_eq!(cfg, SimConfig::default());
    }

    #[test]
    fn unknown_keys_carry_their_line_number() {
        let err = parse_config("SEED 4\nWIBBLE 1\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                line: 2,
                key: "WIBBLE".into()
            }
        );
    }

    #[test]
    fn malformed_values_carry_key_and_line() {
        let err = parse_config("NUMBER-OF-NODES twelve\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::MalformedValue {
                line: 1,
                key: "NUMBER-OF-NODES".into(),
                value: "twelve".into()
            }
        );
        assert!(parse_config("PROMISCUOUS-MODE MAYBE").is_err());
        assert!(parse_config("TERRAIN-DIMENSIONS 1250 1250").is_err());
        assert!(parse_config("SIMULATION-TIME -5S").is_err());
        assert!(parse_config("ROUTING-PROTOCOL AODV").is_err());
    }

    #[test]
    fn comments_and_spacing_are_ignored() {
        let text = "
            # reference scenario, shrunk
            NUMBER-OF-NODES 49   # 7x7
            TERRAIN-DIMENSIONS (750, 750)
            VARIANT fgmdsr
        ";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.node_count, 49);
        assert_eq!(cfg.terrain, (750.0, 750.0));
        assert_eq!(cfg.variant, Variant::Fgmdsr);
    }

    #[test]
    fn mobility_none_zeroes_the_speeds() {
        let cfg = parse_config("MOBILITY NONE\n").unwrap();
        assert_eq!((cfg.v_min, cfg.v_max), (0.0, 0.0));
    }

    #[test]
    fn render_parse_round_trips() {
        let mut cfg = SimConfig::default();
        assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);

        cfg.sim_time_s = 180.0;
        cfg.terrain = (750.0, 1000.0);
        cfg.node_count = 49;
        cfg.pause_s = 12.5;
        cfg.v_min = 1.0;
        cfg.v_max = 7.25;
        cfg.granularity_m = 0.125;
        cfg.radio_range_m = 125.227;
        cfg.variant = Variant::Fgmdsr;
        cfg.selfish_fraction = 0.3;
        cfg.selfish.data_drop_prob = 0.75;
        cfg.grade_threshold = 0.45;
        cfg.punishment.lbp_function = LbpFunction::Exponential;
        cfg.protected_window_s = 30.0;
        cfg.normal_window_s = 45.0;
        cfg.group_count = 9;
        cfg.flow_count = 25;
        cfg.packet_interval_s = 0.5;
        cfg.packet_size_bytes = 256;
        cfg.flow_locality = FlowLocality::IntraGroup;
        cfg.forward_timeout_s = 0.2;
        cfg.seed = 987654321;
        assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);
    }
}
