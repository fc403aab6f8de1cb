//! The production-line object model: stations, buffers, carriers, parts,
//! and worker pools, plus layout validation.
//!
//! A [`Line`] is pure state — the process dynamics that advance it live in
//! [`crate::sim`]. Topology is fixed once built; everything else (queues,
//! phases, counters, worker positions) mutates as the simulation runs.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::dist::Distribution;
use crate::error::BuildError;
use crate::layout::{BufferRole, LayoutSpec, PartSpec, ProcessingSpec, StationKindSpec};
use crate::scenario::JumpProfile;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
        pub struct $name(pub usize);

        impl core::fmt::Display for $name {
            fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(
    /// Index of a station in layout order.
    StationId
);
id_type!(
    /// Index of a buffer in layout order.
    BufferId
);
id_type!(
    /// Index of a worker pool in layout order.
    PoolId
);
id_type!(
    /// Index of a worker (across all pools).
    WorkerId
);

/// A discrete item created at a source. Components carry their setup time
/// so assemblies can enforce the assembly condition.
#[derive(Clone, Debug, PartialEq)]
pub struct Part {
    pub id: u64,
    pub created_at: f64,
    pub assembly_condition: Option<f64>,
    pub origin: StationId,
}

/// Transports parts between stations; holds at most `capacity` parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Carrier {
    pub id: u64,
    pub capacity: u32,
    pub parts: Vec<Part>,
}

/// The mode catalog exposed to observers. `Failing` exists in the catalog
/// but no failure generator drives a transition into it here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StationMode {
    Working,
    Failing,
    Waiting,
}

/// Where a station currently is in its cycle. Phases with a duration have
/// a pending calendar event; `AwaitGet`/`AwaitPut` block until woken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Phase {
    /// Not started yet.
    Idle,
    /// Switched off at a cycle boundary.
    Parked,
    /// Source: setting up a part.
    Setup,
    /// Source waiting time, switch hold, or magazine pacing.
    Wait,
    Getting { buffer: BufferId },
    AwaitGet { buffer: BufferId },
    Processing,
    /// Assembly blocked while removing a scrapped component.
    Disposing,
    Putting { buffer: BufferId },
    AwaitPut { buffer: BufferId },
}

impl Phase {
    pub(crate) fn mode(self) -> StationMode {
        match self {
            Phase::Setup
            | Phase::Wait
            | Phase::Getting { .. }
            | Phase::Processing
            | Phase::Disposing
            | Phase::Putting { .. } => StationMode::Working,
            Phase::Idle | Phase::Parked | Phase::AwaitGet { .. } | Phase::AwaitPut { .. } => {
                StationMode::Waiting
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    Source {
        processing: Distribution,
        waiting_time: f64,
        actionable_waiting: bool,
        carrier_capacity: u32,
        part: PartSpec,
        out: BufferId,
        carrier_in: Option<BufferId>,
    },
    Process {
        law: ProcessingSpec,
        rework_probability: f64,
        input: BufferId,
        out: BufferId,
    },
    Assembly {
        law: ProcessingSpec,
        nok_error_time: f64,
        main_in: BufferId,
        components: Vec<BufferId>,
        out: BufferId,
    },
    Switch {
        processing: Distribution,
        inputs: Vec<BufferId>,
        outputs: Vec<BufferId>,
        in_index: usize,
        out_index: usize,
    },
    Sink {
        processing: Distribution,
        input: BufferId,
        carrier_out: Option<BufferId>,
    },
    Magazine {
        processing: Distribution,
        carrier_in: Option<BufferId>,
        carrier_out: Option<BufferId>,
    },
}

impl Kind {
    pub(crate) fn name(&self) -> &'static str {
        match self {
            Kind::Source { .. } => "source",
            Kind::Process { .. } => "process",
            Kind::Assembly { .. } => "assembly",
            Kind::Switch { .. } => "switch",
            Kind::Sink { .. } => "sink",
            Kind::Magazine { .. } => "magazine",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Station {
    pub(crate) name: String,
    pub(crate) kind: Kind,
    pub(crate) on: bool,
    /// Whether an actionable on/off state is exposed.
    pub(crate) switchable: bool,
    pub(crate) phase: Phase,
    pub(crate) n_ok: u64,
    pub(crate) n_nok: u64,
    /// Scraps keyed by the origin of the scrapped part.
    pub(crate) nok_by_origin: BTreeMap<StationId, u64>,
    /// Duration of the last completed processing step (lagged state).
    pub(crate) last_processing: Option<f64>,
    /// Duration of the timed phase currently in flight.
    pub(crate) phase_duration: f64,
    pub(crate) present_workers: u32,
    /// The carrier being worked on or pushed.
    pub(crate) carrier: Option<Carrier>,
    /// The carrier currently being fetched from a buffer.
    pub(crate) fetch: Option<Carrier>,
    /// Assembly: index of the component input to fetch from next.
    pub(crate) comp_cursor: usize,
    /// Magazine stock of empty carriers.
    pub(crate) stock: VecDeque<Carrier>,
    /// Sink: total parts removed from the line here.
    pub(crate) parts_absorbed: u64,
    /// Processing-time jump installed by a scenario, if any.
    pub(crate) jump: Option<JumpProfile>,
}

impl Station {
    pub(crate) fn mode(&self) -> StationMode {
        self.phase.mode()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Buffer {
    pub(crate) name: String,
    pub(crate) from: StationId,
    pub(crate) to: StationId,
    pub(crate) capacity: u32,
    pub(crate) traversal: f64,
    pub(crate) get_time: Distribution,
    pub(crate) put_time: Distribution,
    /// FIFO of `(carrier, inserted_at)`.
    pub(crate) queue: VecDeque<(Carrier, f64)>,
    /// Slots held by puts that have started but not finished.
    pub(crate) reserved: u32,
    /// The downstream station is blocked waiting for a gettable carrier.
    pub(crate) get_waiter: bool,
    /// The upstream station is blocked waiting for a free slot.
    pub(crate) put_waiter: bool,
}

impl Buffer {
    pub(crate) fn occupancy(&self) -> u32 {
        self.queue.len() as u32 + self.reserved
    }

    pub(crate) fn has_space(&self) -> bool {
        self.occupancy() < self.capacity
    }

    /// Whether the head carrier exists and has finished traversing.
    pub(crate) fn head_ready(&self, now: f64) -> bool {
        self.queue
            .front()
            .map(|(_, at)| at + self.traversal <= now)
            .unwrap_or(false)
    }

    /// Relative number of carriers on the buffer, in `[0, 1]`.
    pub(crate) fn fill(&self) -> f64 {
        self.queue.len() as f64 / self.capacity as f64
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Worker {
    pub(crate) name: String,
    pub(crate) pool: PoolId,
    /// Target station (actionable).
    pub(crate) assigned: StationId,
    pub(crate) location: WorkerLocation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WorkerLocation {
    At(StationId),
    Transit { to: StationId },
}

#[derive(Clone, Debug)]
pub(crate) struct WorkerPool {
    pub(crate) name: String,
    pub(crate) stations: Vec<StationId>,
    pub(crate) workers: Vec<WorkerId>,
    pub(crate) traversal_time: f64,
}

/// A validated, runnable production line.
#[derive(Clone, Debug)]
pub struct Line {
    pub(crate) stations: Vec<Station>,
    pub(crate) buffers: Vec<Buffer>,
    pub(crate) pools: Vec<WorkerPool>,
    pub(crate) workers: Vec<Worker>,
    station_index: BTreeMap<String, StationId>,
    buffer_index: BTreeMap<String, BufferId>,
    pub(crate) next_carrier_id: u64,
    pub(crate) next_part_id: u64,
}

impl Line {
    /// Validates a layout description and builds the line: buffers empty,
    /// stations idle (waiting mode), workers at their initial stations.
    pub fn build(spec: &LayoutSpec) -> Result<Line, BuildError> {
        if spec.version != 1 {
            return Err(BuildError::UnsupportedVersion(spec.version));
        }
        if spec.stations.is_empty() {
            return Err(BuildError::NoStations);
        }
        if !spec
            .stations
            .iter()
            .any(|s| matches!(s.kind, StationKindSpec::Sink(_)))
        {
            return Err(BuildError::NoSink);
        }

        let mut station_index = BTreeMap::new();
        for (i, s) in spec.stations.iter().enumerate() {
            if station_index.insert(s.id.clone(), StationId(i)).is_some() {
                return Err(BuildError::DuplicateId(s.id.clone()));
            }
        }

        // Resolve buffer endpoints; collect per-station connections in
        // listing order (this order defines switch in/out indices).
        let mut buffer_index = BTreeMap::new();
        struct Conn {
            ins: Vec<(BufferId, BufferRole)>,
            outs: Vec<(BufferId, BufferRole)>,
        }
        let mut conns: Vec<Conn> = spec
            .stations
            .iter()
            .map(|_| Conn { ins: Vec::new(), outs: Vec::new() })
            .collect();
        let mut buffers = Vec::new();
        for (i, b) in spec.buffers.iter().enumerate() {
            let id = BufferId(i);
            if buffer_index.insert(b.id.clone(), id).is_some()
                || station_index.contains_key(&b.id)
            {
                return Err(BuildError::DuplicateId(b.id.clone()));
            }
            let from = *station_index.get(&b.from).ok_or_else(|| BuildError::UnknownStation {
                referenced_by: b.id.clone(),
                id: b.from.clone(),
            })?;
            let to = *station_index.get(&b.to).ok_or_else(|| BuildError::UnknownStation {
                referenced_by: b.id.clone(),
                id: b.to.clone(),
            })?;
            if from == to {
                return Err(BuildError::InvalidParameter {
                    object: b.id.clone(),
                    reason: String::from("buffer endpoints must differ"),
                });
            }
            if b.capacity == 0 {
                return Err(BuildError::InvalidParameter {
                    object: b.id.clone(),
                    reason: String::from("capacity must be positive"),
                });
            }
            if !(b.traversal_time >= 0.0)
                || b.get_time.minimum < 0.0
                || b.get_time.exp_mean < 0.0
                || b.put_time.minimum < 0.0
                || b.put_time.exp_mean < 0.0
            {
                return Err(BuildError::InvalidParameter {
                    object: b.id.clone(),
                    reason: String::from("times must be non-negative"),
                });
            }
            conns[from.0].outs.push((id, b.role));
            conns[to.0].ins.push((id, b.role));
            buffers.push(Buffer {
                name: b.id.clone(),
                from,
                to,
                capacity: b.capacity,
                traversal: b.traversal_time,
                get_time: b.get_time,
                put_time: b.put_time,
                queue: VecDeque::new(),
                reserved: 0,
                get_waiter: false,
                put_waiter: false,
            });
        }

        let one = |v: &[(BufferId, BufferRole)],
                   station: &str,
                   what: &'static str|
         -> Result<BufferId, BuildError> {
            match v.len() {
                0 => Err(BuildError::MissingConnection { station: String::from(station), what }),
                1 => Ok(v[0].0),
                _ => Err(BuildError::MultipleConnections { station: String::from(station), what }),
            }
        };
        let at_most_one = |v: &[(BufferId, BufferRole)],
                           station: &str,
                           what: &'static str|
         -> Result<Option<BufferId>, BuildError> {
            match v.len() {
                0 => Ok(None),
                1 => Ok(Some(v[0].0)),
                _ => Err(BuildError::MultipleConnections { station: String::from(station), what }),
            }
        };
        let split = |v: &[(BufferId, BufferRole)], role: BufferRole| -> Vec<(BufferId, BufferRole)> {
            v.iter().copied().filter(|(_, r)| *r == role).collect()
        };
        // Part-transporting connections, regardless of main/component role.
        let loaded = |v: &[(BufferId, BufferRole)]| -> Vec<(BufferId, BufferRole)> {
            v.iter().copied().filter(|(_, r)| *r != BufferRole::Carrier).collect()
        };

        let mut next_carrier_id = 0u64;
        let mut stations = Vec::new();
        for (i, s) in spec.stations.iter().enumerate() {
            let c = &conns[i];
            let check_prob = |p: f64, what: &str| -> Result<(), BuildError> {
                if (0.0..=1.0).contains(&p) {
                    Ok(())
                } else {
                    Err(BuildError::InvalidParameter {
                        object: s.id.clone(),
                        reason: alloc::format!("{what} must be in [0, 1]"),
                    })
                }
            };
            let kind = match &s.kind {
                StationKindSpec::Source(src) => {
                    if src.carrier_capacity == 0 {
                        return Err(BuildError::InvalidParameter {
                            object: s.id.clone(),
                            reason: String::from("carrier capacity must be positive"),
                        });
                    }
                    Kind::Source {
                        processing: src.processing,
                        waiting_time: src.waiting_time,
                        actionable_waiting: src.actionable_waiting_time,
                        carrier_capacity: src.carrier_capacity,
                        part: src.part,
                        out: one(&loaded(&c.outs), &s.id, "output")?,
                        carrier_in: at_most_one(
                            &split(&c.ins, BufferRole::Carrier),
                            &s.id,
                            "carrier supply",
                        )?,
                    }
                }
                StationKindSpec::Process(p) => {
                    check_prob(p.rework_probability, "rework probability")?;
                    Kind::Process {
                        law: p.processing,
                        rework_probability: p.rework_probability,
                        input: one(&c.ins, &s.id, "input")?,
                        out: one(&c.outs, &s.id, "output")?,
                    }
                }
                StationKindSpec::Assembly(a) => {
                    let components: Vec<BufferId> =
                        split(&c.ins, BufferRole::Component).iter().map(|(b, _)| *b).collect();
                    if components.is_empty() {
                        return Err(BuildError::AssemblyWithoutComponentInput(s.id.clone()));
                    }
                    Kind::Assembly {
                        law: a.processing,
                        nok_error_time: a.nok_error_time,
                        main_in: one(&split(&c.ins, BufferRole::Main), &s.id, "main input")?,
                        components,
                        out: one(&c.outs, &s.id, "output")?,
                    }
                }
                StationKindSpec::Switch(sw) => {
                    let inputs: Vec<BufferId> = c.ins.iter().map(|(b, _)| *b).collect();
                    let outputs: Vec<BufferId> = c.outs.iter().map(|(b, _)| *b).collect();
                    if inputs.is_empty() {
                        return Err(BuildError::MissingConnection {
                            station: s.id.clone(),
                            what: "input",
                        });
                    }
                    if outputs.is_empty() {
                        return Err(BuildError::MissingConnection {
                            station: s.id.clone(),
                            what: "output",
                        });
                    }
                    Kind::Switch { processing: sw.processing, inputs, outputs, in_index: 0, out_index: 0 }
                }
                StationKindSpec::Sink(sk) => Kind::Sink {
                    processing: sk.processing,
                    input: one(&c.ins, &s.id, "input")?,
                    carrier_out: at_most_one(
                        &split(&c.outs, BufferRole::Carrier),
                        &s.id,
                        "carrier return",
                    )?,
                },
                StationKindSpec::Magazine(m) => {
                    let carrier_in =
                        at_most_one(&split(&c.ins, BufferRole::Carrier), &s.id, "carrier return")?;
                    let carrier_out =
                        at_most_one(&split(&c.outs, BufferRole::Carrier), &s.id, "carrier supply")?;
                    if carrier_in.is_none() && carrier_out.is_none() {
                        return Err(BuildError::MissingConnection {
                            station: s.id.clone(),
                            what: "carrier",
                        });
                    }
                    Kind::Magazine { processing: m.processing, carrier_in, carrier_out }
                }
            };
            let mut stock = VecDeque::new();
            if let StationKindSpec::Magazine(m) = &s.kind {
                for _ in 0..m.initial_carriers {
                    stock.push_back(Carrier {
                        id: next_carrier_id,
                        capacity: m.carrier_capacity,
                        parts: Vec::new(),
                    });
                    next_carrier_id += 1;
                }
            }
            stations.push(Station {
                name: s.id.clone(),
                kind,
                on: true,
                switchable: s.switchable,
                phase: Phase::Idle,
                n_ok: 0,
                n_nok: 0,
                nok_by_origin: BTreeMap::new(),
                last_processing: None,
                phase_duration: 0.0,
                present_workers: 0,
                carrier: None,
                fetch: None,
                comp_cursor: 0,
                stock,
                parts_absorbed: 0,
                jump: None,
            });
        }

        // Worker pools.
        let mut pools = Vec::new();
        let mut workers = Vec::new();
        for (pi, p) in spec.pools.iter().enumerate() {
            if station_index.contains_key(&p.id) || buffer_index.contains_key(&p.id) {
                return Err(BuildError::DuplicateId(p.id.clone()));
            }
            let mut eligible = Vec::new();
            for name in &p.stations {
                let sid = *station_index.get(name).ok_or_else(|| BuildError::UnknownStation {
                    referenced_by: p.id.clone(),
                    id: name.clone(),
                })?;
                eligible.push(sid);
            }
            if eligible.is_empty() {
                return Err(BuildError::InvalidParameter {
                    object: p.id.clone(),
                    reason: String::from("pool has no stations"),
                });
            }
            let counts: Vec<u32> = match &p.initial_assignment {
                Some(v) => {
                    if v.len() != eligible.len() || v.iter().sum::<u32>() != p.size {
                        return Err(BuildError::InvalidParameter {
                            object: p.id.clone(),
                            reason: String::from(
                                "initial assignment must cover every pool station and sum to the pool size",
                            ),
                        });
                    }
                    v.clone()
                }
                None => {
                    // Round-robin placement.
                    let mut v = alloc::vec![0u32; eligible.len()];
                    for j in 0..p.size {
                        v[(j as usize) % eligible.len()] += 1;
                    }
                    v
                }
            };
            let mut ids = Vec::new();
            for (slot, &count) in counts.iter().enumerate() {
                for _ in 0..count {
                    let wid = WorkerId(workers.len());
                    let at = eligible[slot];
                    workers.push(Worker {
                        name: alloc::format!("{}_w{}", p.id, ids.len()),
                        pool: PoolId(pi),
                        assigned: at,
                        location: WorkerLocation::At(at),
                    });
                    stations[at.0].present_workers += 1;
                    ids.push(wid);
                }
            }
            pools.push(WorkerPool {
                name: p.id.clone(),
                stations: eligible,
                workers: ids,
                traversal_time: p.traversal_time,
            });
        }

        Ok(Line {
            stations,
            buffers,
            pools,
            workers,
            station_index,
            buffer_index,
            next_carrier_id,
            next_part_id: 0,
        })
    }

    pub fn station_id(&self, name: &str) -> Option<StationId> {
        self.station_index.get(name).copied()
    }

    pub fn buffer_id(&self, name: &str) -> Option<BufferId> {
        self.buffer_index.get(name).copied()
    }

    pub fn station_name(&self, id: StationId) -> &str {
        &self.stations[id.0].name
    }

    pub fn buffer_name(&self, id: BufferId) -> &str {
        &self.buffers[id.0].name
    }

    pub fn station_count(&self) -> usize {
        self.stations.len()
    }

    pub fn buffer_count(&self) -> usize {
        self.buffers.len()
    }

    pub fn worker_count(&self) -> usize {
        self.workers.len()
    }

    pub fn station_ids(&self) -> impl Iterator<Item = StationId> {
        (0..self.stations.len()).map(StationId)
    }

    pub fn station_kind_name(&self, id: StationId) -> &'static str {
        self.stations[id.0].kind.name()
    }

    pub fn is_sink(&self, id: StationId) -> bool {
        matches!(self.stations[id.0].kind, Kind::Sink { .. })
    }

    pub fn mode(&self, id: StationId) -> StationMode {
        self.stations[id.0].mode()
    }

    pub fn is_on(&self, id: StationId) -> bool {
        self.stations[id.0].on
    }

    /// OK count of a station (parts set up / cycles completed / parts
    /// finished, depending on the variant).
    pub fn n_ok(&self, id: StationId) -> u64 {
        self.stations[id.0].n_ok
    }

    /// Scrap count recorded at a station.
    pub fn n_nok(&self, id: StationId) -> u64 {
        self.stations[id.0].n_nok
    }

    /// Scrap counts at a station keyed by the scrapped part's origin.
    pub fn nok_by_origin(&self, id: StationId) -> &BTreeMap<StationId, u64> {
        &self.stations[id.0].nok_by_origin
    }

    /// Duration of the station's last completed processing step, if any.
    pub fn last_processing(&self, id: StationId) -> Option<f64> {
        self.stations[id.0].last_processing
    }

    /// Minimal possible duration of the station's processing step; for
    /// staffable stations the fully staffed (pool-sized) minimum.
    pub fn min_processing(&self, id: StationId) -> f64 {
        let law = match &self.stations[id.0].kind {
            Kind::Source { processing, .. }
            | Kind::Switch { processing, .. }
            | Kind::Sink { processing, .. }
            | Kind::Magazine { processing, .. } => return processing.minimum,
            Kind::Process { law, .. } => law,
            Kind::Assembly { law, .. } => law,
        };
        match *law {
            ProcessingSpec::Fixed(d) => d.minimum,
            ProcessingSpec::WorkerScaled { minimum, coefficient, .. } => {
                let n_max: u32 = self
                    .pools
                    .iter()
                    .filter(|p| p.stations.contains(&id))
                    .map(|p| p.workers.len() as u32)
                    .sum();
                minimum * crate::dist::performance_coefficient(coefficient, n_max)
            }
        }
    }

    pub fn present_workers(&self, id: StationId) -> u32 {
        self.stations[id.0].present_workers
    }

    /// Total finished parts over all sinks.
    pub fn total_ok(&self) -> u64 {
        self.stations
            .iter()
            .filter(|s| matches!(s.kind, Kind::Sink { .. }))
            .map(|s| s.n_ok)
            .sum()
    }

    /// Total scrap over all stations.
    pub fn total_nok(&self) -> u64 {
        self.stations.iter().map(|s| s.n_nok).sum()
    }

    /// Parts created over all sources.
    pub fn parts_created(&self) -> u64 {
        self.stations
            .iter()
            .filter(|s| matches!(s.kind, Kind::Source { .. }))
            .map(|s| s.n_ok)
            .sum()
    }

    /// Parts removed from the line at sinks.
    pub fn parts_absorbed(&self) -> u64 {
        self.stations.iter().map(|s| s.parts_absorbed).sum()
    }

    /// Parts currently travelling on buffers or held inside stations.
    pub fn parts_in_flight(&self) -> u64 {
        let on_buffers: usize = self
            .buffers
            .iter()
            .flat_map(|b| b.queue.iter())
            .map(|(c, _)| c.parts.len())
            .sum();
        let in_stations: usize = self
            .stations
            .iter()
            .map(|s| {
                s.carrier.as_ref().map_or(0, |c| c.parts.len())
                    + s.fetch.as_ref().map_or(0, |c| c.parts.len())
                    + s.stock.iter().map(|c| c.parts.len()).sum::<usize>()
            })
            .sum();
        (on_buffers + in_stations) as u64
    }

    pub fn buffer_fill(&self, id: BufferId) -> f64 {
        self.buffers[id.0].fill()
    }

    pub fn buffer_occupancy(&self, id: BufferId) -> u32 {
        self.buffers[id.0].occupancy()
    }

    pub fn buffer_capacity(&self, id: BufferId) -> u32 {
        self.buffers[id.0].capacity
    }

    /// Expected get time of the buffer feeding this station's component or
    /// main input, by buffer name lookup.
    pub fn buffer_get_time(&self, id: BufferId) -> Distribution {
        self.buffers[id.0].get_time
    }

    /// In/out buffer names of a switch, in index order.
    pub fn switch_ports(&self, id: StationId) -> Option<(Vec<&str>, Vec<&str>)> {
        match &self.stations[id.0].kind {
            Kind::Switch { inputs, outputs, .. } => Some((
                inputs.iter().map(|b| self.buffers[b.0].name.as_str()).collect(),
                outputs.iter().map(|b| self.buffers[b.0].name.as_str()).collect(),
            )),
            _ => None,
        }
    }

    pub fn pool_ids(&self) -> impl Iterator<Item = PoolId> {
        (0..self.pools.len()).map(PoolId)
    }

    pub fn pool_name(&self, id: PoolId) -> &str {
        &self.pools[id.0].name
    }

    pub fn pool_stations(&self, id: PoolId) -> Vec<StationId> {
        self.pools[id.0].stations.clone()
    }

    pub fn pool_workers(&self, id: PoolId) -> Vec<WorkerId> {
        self.pools[id.0].workers.clone()
    }

    pub fn worker_name(&self, id: WorkerId) -> &str {
        &self.workers[id.0].name
    }

    pub fn worker_assignment(&self, id: WorkerId) -> StationId {
        self.workers[id.0].assigned
    }

    pub fn workers_in_transit(&self) -> u32 {
        self.workers
            .iter()
            .filter(|w| matches!(w.location, WorkerLocation::Transit { .. }))
            .count() as u32
    }

    /// Installs a processing-time jump on a station.
    pub fn set_jump(&mut self, id: StationId, profile: JumpProfile) {
        self.stations[id.0].jump = Some(profile);
    }

    /// Switches stations off before the line starts (they park instead of
    /// beginning their first cycle).
    pub fn stations_off(&mut self, ids: &[StationId]) {
        for id in ids {
            self.stations[id.0].on = false;
        }
    }

    pub fn jump(&self, id: StationId) -> Option<JumpProfile> {
        self.stations[id.0].jump
    }

    /// Checks the structural invariants: part conservation, buffer
    /// capacity and FIFO timestamps, worker conservation. Returns a
    /// description of the first violation.
    pub fn audit(&self) -> Result<(), String> {
        let created = self.parts_created();
        let accounted = self.parts_in_flight() + self.parts_absorbed() + self.total_nok();
        if created != accounted {
            return Err(alloc::format!(
                "part conservation violated: created {created}, accounted {accounted}"
            ));
        }
        for b in &self.buffers {
            if b.occupancy() > b.capacity {
                return Err(alloc::format!(
                    "buffer `{}` occupancy {} over capacity {}",
                    b.name,
                    b.occupancy(),
                    b.capacity
                ));
            }
            let mut last = f64::NEG_INFINITY;
            for (_, at) in &b.queue {
                if *at < last {
                    return Err(alloc::format!("buffer `{}` violates FIFO insertion order", b.name));
                }
                last = *at;
            }
        }
        for (pi, p) in self.pools.iter().enumerate() {
            let present: u32 = p
                .workers
                .iter()
                .filter(|w| matches!(self.workers[w.0].location, WorkerLocation::At(_)))
                .count() as u32;
            let transit: u32 = p
                .workers
                .iter()
                .filter(|w| matches!(self.workers[w.0].location, WorkerLocation::Transit { .. }))
                .count() as u32;
            if present + transit != p.workers.len() as u32 {
                return Err(alloc::format!("pool `{}` lost workers", p.name));
            }
            let counted: u32 = self
                .stations
                .iter()
                .enumerate()
                .map(|(si, s)| {
                    s.present_workers.min(
                        self.workers
                            .iter()
                            .filter(|w| {
                                w.pool == PoolId(pi)
                                    && w.location == WorkerLocation::At(StationId(si))
                            })
                            .count() as u32,
                    )
                })
                .sum();
            if counted != present {
                return Err(alloc::format!(
                    "pool `{}` station head counts disagree with worker locations",
                    p.name
                ));
            }
        }
        // Present-worker counters across all pools must match locations.
        for (si, s) in self.stations.iter().enumerate() {
            let located = self
                .workers
                .iter()
                .filter(|w| w.location == WorkerLocation::At(StationId(si)))
                .count() as u32;
            if located != s.present_workers {
                return Err(alloc::format!(
                    "station `{}` head count {} disagrees with worker locations {}",
                    s.name,
                    s.present_workers,
                    located
                ));
            }
        }
        Ok(())
    }
}
