//! Declarative layout descriptions.
//!
//! A [`LayoutSpec`] is a plain data tree (JSON-compatible, see the `takt`
//! crate for the file format) listing stations, buffers, and worker pools.
//! [`crate::line::Line::build`] validates it and produces a runnable line.
//!
//! Buffers are directed: `from` pushes, `to` gets. A buffer's `role` says
//! what it transports for the `to` side — the main carrier track, a
//! component feed into an assembly, or empty carriers (source supply /
//! sink return / magazine loops).

use alloc::string::String;
use alloc::vec::Vec;

use crate::dist::Distribution;

#[cfg(feature = "serde")]
fn default_true() -> bool {
    true
}
#[cfg(feature = "serde")]
fn default_version() -> u32 {
    1
}
fn default_carrier_capacity() -> u32 {
    2
}
#[cfg(feature = "serde")]
fn zero_dist() -> Distribution {
    Distribution::constant(0.0)
}

/// Root of a layout description. `version` is mandatory in serialized form.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayoutSpec {
    #[cfg_attr(feature = "serde", serde(default = "default_version"))]
    pub version: u32,
    pub stations: Vec<StationSpec>,
    pub buffers: Vec<BufferSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub pools: Vec<PoolSpec>,
}

impl LayoutSpec {
    pub fn new() -> Self {
        LayoutSpec { version: 1, stations: Vec::new(), buffers: Vec::new(), pools: Vec::new() }
    }
}

impl Default for LayoutSpec {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StationSpec {
    pub id: String,
    pub kind: StationKindSpec,
    /// Exposes an actionable on/off state for this station.
    #[cfg_attr(feature = "serde", serde(default))]
    pub switchable: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StationKindSpec {
    Source(SourceSpec),
    Process(ProcessSpec),
    Assembly(AssemblySpec),
    Switch(SwitchSpec),
    Sink(SinkSpec),
    Magazine(MagazineSpec),
}

/// Sets up parts on carriers. Between two parts it waits for the current
/// (actionable) waiting time. Carriers are created on the spot unless a
/// carrier-supply buffer is connected.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SourceSpec {
    pub processing: Distribution,
    #[cfg_attr(feature = "serde", serde(default))]
    pub waiting_time: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_true"))]
    pub actionable_waiting_time: bool,
    /// How many parts a carrier created here can hold (room for the part
    /// set up at the source plus components added at assemblies).
    #[cfg_attr(feature = "serde", serde(default = "default_carrier_capacity"))]
    pub carrier_capacity: u32,
    #[cfg_attr(feature = "serde", serde(default))]
    pub part: PartSpec,
}

/// Per-part properties stamped at setup.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartSpec {
    /// Maximum age (setup to assembly-process start) before the part is
    /// scrapped at an assembly.
    #[cfg_attr(feature = "serde", serde(default))]
    pub assembly_condition: Option<f64>,
}

/// Applies one work step per carrier. With `rework_probability` the
/// sampled duration doubles (a single repetition).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProcessSpec {
    pub processing: ProcessingSpec,
    #[cfg_attr(feature = "serde", serde(default))]
    pub rework_probability: f64,
}

/// Joins one component from every component input onto the main carrier.
/// Expired components are scrapped, which occupies the station for
/// `nok_error_time` before the next component is fetched.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssemblySpec {
    pub processing: ProcessingSpec,
    #[cfg_attr(feature = "serde", serde(default))]
    pub nok_error_time: f64,
}

/// Routes carriers between its selectable in- and out-buffers.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SwitchSpec {
    pub processing: Distribution,
}

/// Removes finished parts from the line. Empty carriers are discarded or
/// returned through a carrier buffer if one is connected.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SinkSpec {
    #[cfg_attr(feature = "serde", serde(default = "zero_dist"))]
    pub processing: Distribution,
}

/// Manages the stock of empty carriers for circular lines.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MagazineSpec {
    pub initial_carriers: u32,
    #[cfg_attr(feature = "serde", serde(default = "default_carrier_capacity"))]
    pub carrier_capacity: u32,
    #[cfg_attr(feature = "serde", serde(default = "zero_dist"))]
    pub processing: Distribution,
}

/// A station's processing-time law.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProcessingSpec {
    /// `T + Exp(S)`, independent of staffing.
    Fixed(Distribution),
    /// `T * exp(-coefficient * n) + Exp(noise_scale * T)` for `n` present
    /// workers.
    WorkerScaled { minimum: f64, noise_scale: f64, coefficient: f64 },
}

impl ProcessingSpec {
    pub fn minimum(&self) -> f64 {
        match self {
            ProcessingSpec::Fixed(d) => d.minimum,
            ProcessingSpec::WorkerScaled { minimum, .. } => *minimum,
        }
    }
}

/// What the buffer transports, from the receiving station's perspective.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BufferRole {
    /// Loaded carriers on the main track.
    #[default]
    Main,
    /// Component feed into an assembly.
    Component,
    /// Empty carriers (source supply, sink return, magazine loops).
    Carrier,
}

/// A finite FIFO buffer between two stations. A carrier becomes gettable
/// `traversal_time` after insertion; getting and putting a carrier take
/// `get_time` / `put_time`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BufferSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub capacity: u32,
    #[cfg_attr(feature = "serde", serde(default))]
    pub traversal_time: f64,
    #[cfg_attr(feature = "serde", serde(default = "zero_dist"))]
    pub get_time: Distribution,
    #[cfg_attr(feature = "serde", serde(default = "zero_dist"))]
    pub put_time: Distribution,
    #[cfg_attr(feature = "serde", serde(default))]
    pub role: BufferRole,
}

impl BufferSpec {
    /// A zero-time buffer named `Buffer_<from>_to_<to>`.
    pub fn between(from: &str, to: &str, capacity: u32) -> Self {
        let mut id = String::from("Buffer_");
        id.push_str(from);
        id.push_str("_to_");
        id.push_str(to);
        BufferSpec {
            id,
            from: String::from(from),
            to: String::from(to),
            capacity,
            traversal_time: 0.0,
            get_time: Distribution::constant(0.0),
            put_time: Distribution::constant(0.0),
            role: BufferRole::Main,
        }
    }

    pub fn with_role(mut self, role: BufferRole) -> Self {
        self.role = role;
        self
    }

    pub fn with_get_time(mut self, d: Distribution) -> Self {
        self.get_time = d;
        self
    }

    pub fn with_put_time(mut self, d: Distribution) -> Self {
        self.put_time = d;
        self
    }

    pub fn with_traversal(mut self, t: f64) -> Self {
        self.traversal_time = t;
        self
    }
}

/// A pool of interchangeable workers attached to a set of stations.
/// `initial_assignment` gives per-station head counts (round-robin when
/// omitted); pool size stays constant over an episode.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PoolSpec {
    pub id: String,
    pub stations: Vec<String>,
    pub size: u32,
    #[cfg_attr(feature = "serde", serde(default))]
    pub traversal_time: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub initial_assignment: Option<Vec<u32>>,
}

impl StationSpec {
    pub fn source(id: &str, spec: SourceSpec) -> Self {
        StationSpec { id: String::from(id), kind: StationKindSpec::Source(spec), switchable: false }
    }
    pub fn process(id: &str, spec: ProcessSpec) -> Self {
        StationSpec { id: String::from(id), kind: StationKindSpec::Process(spec), switchable: false }
    }
    pub fn assembly(id: &str, spec: AssemblySpec) -> Self {
        StationSpec { id: String::from(id), kind: StationKindSpec::Assembly(spec), switchable: false }
    }
    pub fn switch(id: &str, spec: SwitchSpec) -> Self {
        StationSpec { id: String::from(id), kind: StationKindSpec::Switch(spec), switchable: false }
    }
    pub fn sink(id: &str, spec: SinkSpec) -> Self {
        StationSpec { id: String::from(id), kind: StationKindSpec::Sink(spec), switchable: false }
    }
    pub fn magazine(id: &str, spec: MagazineSpec) -> Self {
        StationSpec { id: String::from(id), kind: StationKindSpec::Magazine(spec), switchable: false }
    }

    /// Expose an actionable on/off state.
    pub fn switchable(mut self) -> Self {
        self.switchable = true;
        self
    }
}

impl SourceSpec {
    pub fn new(processing: Distribution) -> Self {
        SourceSpec {
            processing,
            waiting_time: 0.0,
            actionable_waiting_time: true,
            carrier_capacity: default_carrier_capacity(),
            part: PartSpec::default(),
        }
    }

    pub fn with_waiting_time(mut self, w: f64) -> Self {
        self.waiting_time = w;
        self
    }

    pub fn with_assembly_condition(mut self, t_ac: f64) -> Self {
        self.part.assembly_condition = Some(t_ac);
        self
    }

    pub fn with_carrier_capacity(mut self, cap: u32) -> Self {
        self.carrier_capacity = cap;
        self
    }

    pub fn non_actionable(mut self) -> Self {
        self.actionable_waiting_time = false;
        self
    }
}
