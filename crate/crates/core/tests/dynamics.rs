//! Process-interaction dynamics: blocking, starving, scrapping, rework,
//! routing, worker traversal, carrier loops, and deadlocks.

mod common;

use takt_core::layout::{
    AssemblySpec, BufferRole, BufferSpec, LayoutSpec, MagazineSpec, PoolSpec, ProcessSpec,
    ProcessingSpec, SinkSpec, SourceSpec, StationSpec, SwitchSpec,
};
use takt_core::sim::EventNote;
use takt_core::{BuildError, Distribution, Line, Sim, SimTime, StationMode};

#[test]
fn showcase_builds_with_six_buffers() {
    let line = Line::build(&common::showcase()).unwrap();
    assert_eq!(line.station_count(), 7);
    assert_eq!(line.buffer_count(), 6);
    for id in line.station_ids() {
        assert_eq!(line.mode(id), StationMode::Waiting, "fresh stations idle in waiting mode");
    }
}

#[test]
fn empty_layout_is_rejected() {
    assert_eq!(Line::build(&LayoutSpec::new()).unwrap_err(), BuildError::NoStations);
    // A layout with stations but no sink is just as dead.
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(1.0)),
    ));
    assert_eq!(Line::build(&spec).unwrap_err(), BuildError::NoSink);
}

#[test]
fn build_catches_dangling_references() {
    let mut spec = common::showcase();
    spec.buffers.push(BufferSpec::between("Nowhere", "Sink1", 1));
    assert!(matches!(Line::build(&spec), Err(BuildError::UnknownStation { .. })));

    let mut spec = common::showcase();
    spec.pools.push(PoolSpec {
        id: "Pool".into(),
        stations: vec!["Ghost".into()],
        size: 1,
        traversal_time: 0.0,
        initial_assignment: None,
    });
    assert!(matches!(Line::build(&spec), Err(BuildError::UnknownStation { .. })));
}

#[test]
fn assembly_needs_a_component_input() {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(1.0)),
    ));
    spec.stations.push(StationSpec::assembly(
        "Assembly",
        AssemblySpec {
            processing: ProcessingSpec::Fixed(Distribution::constant(1.0)),
            nok_error_time: 0.0,
        },
    ));
    spec.stations
        .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
    spec.buffers.push(BufferSpec::between("Source", "Assembly", 2));
    spec.buffers.push(BufferSpec::between("Assembly", "Sink", 2));
    assert_eq!(
        Line::build(&spec).unwrap_err(),
        BuildError::AssemblyWithoutComponentInput("Assembly".into())
    );
}

#[test]
fn source_blocks_when_downstream_full() {
    // Capacity-1 buffer, sink switched off: the second part cannot be
    // pushed and the source must sit in waiting mode.
    let mut spec = common::straight_line(1.0, 1.0, 1);
    spec.stations[2].switchable = true;
    let mut line = Line::build(&spec).unwrap();
    let sink = line.station_id("Sink").unwrap();
    let process = line.station_id("Process").unwrap();
    let source = line.station_id("Source").unwrap();
    line.stations_off(&[sink, process]);
    let mut sim = Sim::new(line, 1);
    sim.run_until(SimTime::new(30.0));
    assert_eq!(sim.line().mode(source), StationMode::Waiting);
    assert_eq!(sim.line().parts_created(), 2, "one on the buffer, one stuck in the put");
    assert_eq!(sim.line().buffer_occupancy(takt_core::BufferId(0)), 1);
}

#[test]
fn buffer_traversal_gates_gets() {
    let mut spec = common::straight_line(1.0, 0.0, 3);
    spec.buffers[0].traversal_time = 10.0;
    let line = Line::build(&spec).unwrap();
    let mut sim = Sim::new(line, 2);
    // First part enters the buffer at t = 1 and matures at t = 11.
    sim.run_until(SimTime::new(10.5));
    assert_eq!(sim.line().parts_absorbed(), 0);
    sim.run_until(SimTime::new(12.0));
    assert!(sim.line().parts_absorbed() >= 1);
}

/// Unblocked source inter-departure times average the setup mean plus the
/// waiting time.
#[test]
fn source_interdeparture_mean() {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::new(5.0, 0.5))
            .with_waiting_time(18.5)
            .with_carrier_capacity(1),
    ));
    spec.stations
        .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
    spec.buffers.push(BufferSpec::between("Source", "Sink", 3));
    let line = Line::build(&spec).unwrap();
    let mut sim = Sim::new(line, 3);
    sim.set_event_logging(true);
    sim.run_until(SimTime::new(240_000.0));
    let departures: Vec<f64> = sim
        .event_log()
        .unwrap()
        .iter()
        .filter(|r| r.object == "Source" && matches!(r.note, EventNote::PutDone { .. }))
        .map(|r| r.time)
        .collect();
    assert!(departures.len() > 9000, "got {}", departures.len());
    let gaps: Vec<f64> = departures.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    assert!((mean - 24.0).abs() < 0.05, "inter-departure mean {mean}");
}

/// An expired component is scrapped and blocks the assembly for the
/// removal time before the next component is fetched.
#[test]
fn assembly_scraps_expired_components() {
    let build = |t_ac: Option<f64>| {
        let mut spec = LayoutSpec::new();
        let mut comp = SourceSpec::new(Distribution::constant(1.0)).with_carrier_capacity(1);
        comp.part.assembly_condition = t_ac;
        spec.stations.push(StationSpec::source("Comp", comp));
        spec.stations.push(StationSpec::source(
            "Main",
            SourceSpec::new(Distribution::constant(1.0)).with_carrier_capacity(2),
        ));
        spec.stations.push(StationSpec::assembly(
            "Assembly",
            AssemblySpec {
                processing: ProcessingSpec::Fixed(Distribution::constant(2.0)),
                nok_error_time: 5.0,
            },
        ));
        spec.stations
            .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
        // Components need 36 units to traverse: age at process start > 35.
        spec.buffers.push(
            BufferSpec::between("Comp", "Assembly", 2)
                .with_role(BufferRole::Component)
                .with_traversal(36.0),
        );
        spec.buffers.push(BufferSpec::between("Main", "Assembly", 2));
        spec.buffers.push(BufferSpec::between("Assembly", "Sink", 2));
        Line::build(&spec).unwrap()
    };

    let mut sim = Sim::new(build(Some(35.0)), 4);
    sim.set_event_logging(true);
    sim.run_until(SimTime::new(120.0));
    let assembly = sim.line().station_id("Assembly").unwrap();
    assert!(sim.line().n_nok(assembly) > 0, "expired components must scrap");
    assert_eq!(sim.line().n_ok(assembly), 0, "nothing fresh ever arrives");
    // Scrap origins point at the component source.
    let comp = sim.line().station_id("Comp").unwrap();
    assert_eq!(sim.line().nok_by_origin(assembly).get(&comp), Some(&sim.line().n_nok(assembly)));
    // Disposal occupies the station for exactly the removal time.
    let log = sim.event_log().unwrap();
    let scrap_at = log
        .iter()
        .find(|r| matches!(r.note, EventNote::Scrap { .. }))
        .map(|r| r.time)
        .unwrap();
    let dispose_at = log
        .iter()
        .find(|r| matches!(r.note, EventNote::DisposeDone))
        .map(|r| r.time)
        .unwrap();
    assert!((dispose_at - scrap_at - 5.0).abs() < 1e-9);
    // Age recorded strictly above the bound.
    for r in log {
        if let EventNote::Scrap { age, .. } = r.note {
            assert!(age > 35.0);
        }
    }

    // Without an assembly condition the same line never scraps.
    let mut sim = Sim::new(build(None), 4);
    sim.run_until(SimTime::new(120.0));
    let assembly = sim.line().station_id("Assembly").unwrap();
    assert_eq!(sim.line().n_nok(assembly), 0);
    assert!(sim.line().n_ok(assembly) > 0);
}

#[test]
fn rework_doubles_the_sampled_duration() {
    let run = |p: f64, t: f64, seed: u64, horizon: f64| {
        let mut spec = LayoutSpec::new();
        spec.stations.push(StationSpec::source(
            "Source",
            SourceSpec::new(Distribution::constant(0.5)).with_carrier_capacity(1),
        ));
        spec.stations.push(StationSpec::process(
            "Process",
            ProcessSpec {
                processing: ProcessingSpec::Fixed(Distribution::constant(t)),
                rework_probability: p,
            },
        ));
        spec.stations
            .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
        spec.buffers.push(BufferSpec::between("Source", "Process", 3));
        spec.buffers.push(BufferSpec::between("Process", "Sink", 3));
        let mut sim = Sim::new(Line::build(&spec).unwrap(), seed);
        sim.set_event_logging(true);
        sim.run_until(SimTime::new(horizon));
        sim.take_event_log()
            .into_iter()
            .filter(|r| r.object == "Process")
            .filter_map(|r| match r.note {
                EventNote::ProcessDone { duration } => Some(duration),
                _ => None,
            })
            .collect::<Vec<f64>>()
    };

    // Plain cycles.
    for d in run(0.0, 15.0, 5, 500.0) {
        assert_eq!(d, 15.0);
    }
    // Forced rework: every cycle doubled.
    for d in run(1.0, 15.0, 5, 500.0) {
        assert_eq!(d, 30.0);
    }
    // Half rework at T = 10: mean 15 over ten thousand cycles.
    let durations = run(0.5, 10.0, 6, 160_000.0);
    assert!(durations.len() >= 10_000, "{}", durations.len());
    let mean = durations[..10_000].iter().sum::<f64>() / 10_000.0;
    assert!((mean - 15.0).abs() < 0.1, "rework mean {mean}");
}

#[test]
fn single_port_switch_acts_like_a_process() {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(1.0)).with_carrier_capacity(1),
    ));
    spec.stations
        .push(StationSpec::switch("Switch", SwitchSpec { processing: Distribution::constant(3.0) }));
    spec.stations
        .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
    spec.buffers.push(BufferSpec::between("Source", "Switch", 2));
    spec.buffers.push(BufferSpec::between("Switch", "Sink", 2));
    let mut sim = Sim::new(Line::build(&spec).unwrap(), 7);
    sim.run_until(SimTime::new(300.0));
    let absorbed = sim.line().parts_absorbed() as f64;
    assert!((absorbed - 100.0).abs() <= 2.0, "paced by the switch hold time: {absorbed}");
}

/// Moving a worker empties the origin's head count immediately but only
/// fills the target's after the traversal; cycles sample the head count
/// at their start.
#[test]
fn worker_reassignment_timing() {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(2.0)).with_carrier_capacity(1),
    ));
    for name in ["A", "B"] {
        spec.stations.push(StationSpec::process(
            name,
            ProcessSpec {
                processing: ProcessingSpec::WorkerScaled {
                    minimum: 20.0,
                    noise_scale: 0.0,
                    coefficient: 0.3,
                },
                rework_probability: 0.0,
            },
        ));
    }
    spec.stations
        .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));
    spec.buffers.push(BufferSpec::between("Source", "A", 3));
    spec.buffers.push(BufferSpec::between("A", "B", 3));
    spec.buffers.push(BufferSpec::between("B", "Sink", 3));
    spec.pools.push(PoolSpec {
        id: "Pool".into(),
        stations: vec!["A".into(), "B".into()],
        size: 3,
        traversal_time: 5.0,
        initial_assignment: Some(vec![3, 0]),
    });
    let line = Line::build(&spec).unwrap();
    let a = line.station_id("A").unwrap();
    let b = line.station_id("B").unwrap();
    let worker = line.pool_workers(takt_core::PoolId(0))[0];

    let mut sim = Sim::new(line, 8);
    sim.set_event_logging(true);
    // A's first cycle: starts at t = 2 with three workers.
    sim.run_until(SimTime::new(9.0));
    assert_eq!(sim.line().present_workers(a), 3);
    sim.reassign_worker(worker, b);
    // Departure is immediate; arrival 5 units later.
    assert_eq!(sim.line().present_workers(a), 2);
    assert_eq!(sim.line().present_workers(b), 0);
    assert_eq!(sim.line().workers_in_transit(), 1);
    sim.run_until(SimTime::new(60.0));
    assert_eq!(sim.line().present_workers(b), 1);
    assert_eq!(sim.line().workers_in_transit(), 0);

    let log = sim.take_event_log();
    let durations = |station: &str| -> Vec<f64> {
        log.iter()
            .filter(|r| r.object == station)
            .filter_map(|r| match r.note {
                EventNote::ProcessDone { duration } => Some(duration),
                _ => None,
            })
            .collect()
    };
    let e = |n: u32| 20.0 * takt_core::performance_coefficient(0.3, n);
    let a_durations = durations("A");
    // Cycle started before the move keeps its three-worker duration; the
    // next one samples with two.
    assert!((a_durations[0] - e(3)).abs() < 1e-9, "{a_durations:?}");
    assert!((a_durations[1] - e(2)).abs() < 1e-9, "{a_durations:?}");
    let b_durations = durations("B");
    // B's first carrier arrives before the worker does (unstaffed cycle),
    // the following cycle uses the arrival.
    assert!((b_durations[0] - e(0)).abs() < 1e-9, "{b_durations:?}");
    assert!((b_durations[1] - e(1)).abs() < 1e-9, "{b_durations:?}");

    // Reassigning to the current station is a no-op.
    let before = sim.pending_events();
    sim.reassign_worker(worker, b);
    assert_eq!(sim.pending_events(), before);
    assert_eq!(sim.line().present_workers(b), 1);
}

#[test]
fn magazine_carrier_loop_recycles() {
    let mut spec = LayoutSpec::new();
    spec.stations.push(StationSpec::magazine(
        "Magazine",
        MagazineSpec {
            initial_carriers: 3,
            carrier_capacity: 1,
            processing: Distribution::constant(0.0),
        },
    ));
    spec.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(2.0)).with_carrier_capacity(1),
    ));
    spec.stations.push(StationSpec::process(
        "Process",
        ProcessSpec {
            processing: ProcessingSpec::Fixed(Distribution::constant(3.0)),
            rework_probability: 0.0,
        },
    ));
    spec.stations
        .push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(1.0) }));
    spec.buffers.push(
        BufferSpec::between("Magazine", "Source", 3).with_role(BufferRole::Carrier),
    );
    spec.buffers.push(BufferSpec::between("Source", "Process", 2));
    spec.buffers.push(BufferSpec::between("Process", "Sink", 2));
    spec.buffers
        .push(BufferSpec::between("Sink", "Magazine", 3).with_role(BufferRole::Carrier));
    let mut sim = Sim::new(Line::build(&spec).unwrap(), 9);
    sim.run_until(SimTime::new(200.0));
    let absorbed = sim.line().parts_absorbed();
    assert!(absorbed > 20, "the loop must keep producing, got {absorbed}");
    sim.line().audit().unwrap();
    // Only the three initial carriers circulate: production is paced by
    // the process, and nothing piles up beyond them.
    assert!(sim.line().parts_in_flight() <= 3);
}

#[test]
fn deadlock_detection() {
    // A fresh line with running sources is not deadlocked.
    let line = Line::build(&common::straight_line(1.0, 1.0, 2)).unwrap();
    let mut sim = Sim::new(line, 10);
    sim.run_until(SimTime::new(5.0));
    assert!(!sim.detect_deadlock());

    // Sever the flow: switch the sink off. Buffers fill, everything
    // blocks, the calendar drains, and the counters freeze.
    let mut spec = common::straight_line(1.0, 1.0, 2);
    spec.stations[2].switchable = true;
    let mut line = Line::build(&spec).unwrap();
    let sink = line.station_id("Sink").unwrap();
    line.stations_off(&[sink]);
    let mut sim = Sim::new(line, 10);
    sim.run_until(SimTime::new(50.0));
    assert!(sim.detect_deadlock());
    let created = sim.line().parts_created();
    sim.run_until(SimTime::new(550.0));
    assert_eq!(sim.line().parts_created(), created, "counters frozen after deadlock");
    assert!(sim.detect_deadlock());
}
