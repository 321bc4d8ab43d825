pub mod congest;
pub mod construction;
pub mod generators;
pub mod graph;
pub mod mst;
pub mod oracle;
pub mod routing;
pub mod shortcut;
