//! Front end for the `steer` command: scene and path files, the
//! subcommands, SVG rendering and the verification suites.

pub mod app;
pub mod commands;
pub mod corpus;
pub mod files;
pub mod render;
pub mod scene;
pub mod verify;
