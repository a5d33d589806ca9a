//! Level-gated stderr logging controlled by `THERMOTRACK_LOG`
//! (`error`, `info`, or `debug`; default `error`).

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Error = 0,
    Info = 1,
    Debug = 2,
}

static LEVEL: OnceLock<Level> = OnceLock::new();

pub fn level() -> Level {
    *LEVEL.get_or_init(|| match std::env::var("THERMOTRACK_LOG").as_deref() {
        Ok("debug") => Level::Debug,
        Ok("info") => Level::Info,
        _ => Level::Error,
    })
}

pub fn info(msg: std::fmt::Arguments<'_>) {
    if level() >= Level::Info {
        eprintln!("info: {msg}");
    }
}

pub fn debug(msg: std::fmt::Arguments<'_>) {
    if level() >= Level::Debug {
        eprintln!("debug: {msg}");
    }
}

#[macro_export]
macro_rules! log_info {
    ($($arg:tt)*) => { $crate::logging::info(format_args!($($arg)*)) };
}

#[macro_export]
macro_rules! log_debug {
    ($($arg:tt)*) => { $crate::logging::debug(format_args!($($arg)*)) };
}
