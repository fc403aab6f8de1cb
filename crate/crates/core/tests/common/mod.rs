//! Shared fixtures for the integration suites.

use takt_core::layout::{
    AssemblySpec, BufferRole, BufferSpec, LayoutSpec, ProcessSpec, ProcessingSpec, SinkSpec,
    SourceSpec, StationSpec, SwitchSpec,
};
use takt_core::Distribution;

/// The showcase line: two sources into an assembly, one process, a switch
/// fanning out to two sinks. Deterministic processing times.
pub fn showcase() -> LayoutSpec {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source1",
        SourceSpec::new(Distribution::constant(5.0)).with_carrier_capacity(2),
    ));
    spec.stations.push(StationSpec::source(
        "Source2",
        SourceSpec::new(Distribution::constant(5.0))
            .with_carrier_capacity(1)
            .with_assembly_condition(100.0),
    ));
    spec.stations.push(StationSpec::assembly(
        "Assembly",
        AssemblySpec {
            processing: ProcessingSpec::Fixed(Distribution::constant(40.0)),
            nok_error_time: 5.0,
        },
    ));
    spec.stations.push(StationSpec::process(
        "Process",
        ProcessSpec {
            processing: ProcessingSpec::Fixed(Distribution::constant(15.0)),
            rework_probability: 0.0,
        },
    ));
    spec.stations
        .push(StationSpec::switch("Switch", SwitchSpec { processing: Distribution::constant(1.0) }));
    spec.stations
        .push(StationSpec::sink("Sink1", SinkSpec { processing: Distribution::constant(70.0) }));
    spec.stations
        .push(StationSpec::sink("Sink2", SinkSpec { processing: Distribution::constant(70.0) }));

    spec.buffers.push(
        BufferSpec::between("Source2", "Assembly", 2)
            .with_role(BufferRole::Component)
            .with_traversal(5.0),
    );
    spec.buffers.push(BufferSpec::between("Source1", "Assembly", 3).with_traversal(5.0));
    spec.buffers.push(BufferSpec::between("Assembly", "Process", 2).with_traversal(2.0));
    spec.buffers.push(BufferSpec::between("Process", "Switch", 2).with_traversal(2.0));
    spec.buffers.push(BufferSpec::between("Switch", "Sink1", 3).with_traversal(2.0));
    spec.buffers.push(BufferSpec::between("Switch", "Sink2", 3).with_traversal(2.0));
    spec
}

/// `source -> process -> sink` with everything deterministic.
#[allow(dead_code)]
pub fn straight_line(source_time: f64, process_time: f64, buffer_capacity: u32) -> LayoutSpec {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(source_time)).with_carrier_capacity(1),
    ));
    spec.stations.push(StationSpec::process(
        "Process",
        ProcessSpec {
            processing: ProcessingSpec::Fixed(Distribution::constant(process_time)),
            rework_probability: 0.0,
        },
    ));
    spec.stations
        .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
    spec.buffers.push(BufferSpec::between("Source", "Process", buffer_capacity));
    spec.buffers.push(BufferSpec::between("Process", "Sink", buffer_capacity));
    spec
}
