pub mod cli;
pub mod format;
pub mod grid;
pub mod oracle;
pub mod par;
pub mod render;
pub mod report;
pub mod screens;
pub mod state;
pub mod table;
pub mod tau;
pub mod words;
