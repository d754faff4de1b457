//! Command-line tool and HTTP service for rationale-based MISRA C triage.

pub mod api;
pub mod commands;
pub mod config;
