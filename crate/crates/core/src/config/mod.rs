//! Arena configuration files: a YAML subset, the typed schema, semantic
//! validation and instantiation into a [`World`](crate::world::World).

pub mod diagnostics;
pub mod instantiate;
pub mod schema;
pub mod validate;
pub mod yaml;

pub use diagnostics::{has_errors, ConfigError, Diagnostic, Severity};
pub use instantiate::{instantiate_arena, Instantiated, InstantiationError, PLACEMENT_ATTEMPTS};
pub use schema::{config_from_node, parse_config, serialize_config, ArenaConfigFile, ArenaSpec, Blackouts, ItemSpec, Located, NumAttr, Perspective};
pub use validate::{validate, validate_arena};

/// Parses and validates in one go. Warnings are returned alongside the file.
pub fn load_config(text: &str) -> Result<(ArenaConfigFile, Vec<Diagnostic>), ConfigError> {
    let (config, mut diagnostics) = parse_config(text)?;
    diagnostics.extend(validate(&config));
    if has_errors(&diagnostics) {
        diagnostics.sort_by_key(|d| (d.line, d.column));
        return Err(ConfigError(diagnostics));
    }
    Ok((config, diagnostics))
}
