//! Library surface of the command-line front end: the manifold spec file
//! format and its conversion to charts.

pub mod spec;
