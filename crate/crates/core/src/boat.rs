//! Kinematic sailing boat and the closed-loop course simulation.
//!
//! Heading is driven directly by the rudder (`turn_gain` degrees of heading
//! per degree of rudder per second). Boat speed is the wind speed times a
//! polar fraction looked up from the apparent wind angle; there is no hull
//! dynamics, so each step moves exactly `speed * dt` along the heading.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::fuzzy::RuleBase;
use crate::wind::{WindConfig, WindGenerator, WindParams, WindSample};
use crate::{wrap_180, wrap_360, Error, Result};

/// East/north position in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoatState {
    pub pos: Point,
    /// Degrees, 0 = north, clockwise positive, in `[0, 360)`.
    pub heading: f64,
    /// m/s
    pub speed: f64,
}

/// Horizontal leg length; with it the first-turn angles are
/// `atan(offset / 250)`.
pub const LEG_LENGTH: f64 = 250.0;

/// Vertical offsets of the three standard courses, in metres.
pub const COURSE_OFFSETS: [u32; 3] = [25, 50, 100];

#[derive(Debug, Clone, PartialEq)]
pub struct Course {
    pub start: Point,
    pub waypoints: Vec<Point>,
    pub vertical_offset: u32,
}

impl Course {
    /// Two-leg course: out to `(250, offset)`, then back to `(500, 0)`.
    pub fn from_offset(offset: u32) -> Result<Self> {
        let mut c = Self::single_leg(offset)?;
        c.waypoints.push(Point::new(2.0 * LEG_LENGTH, 0.0));
        Ok(c)
    }

    /// Only the first leg, ending at the turn waypoint.
    pub fn single_leg(offset: u32) -> Result<Self> {
        if !COURSE_OFFSETS.contains(&offset) {
            return Err(Error::InvalidOffset(offset));
        }
        Ok(Self {
            start: Point::ORIGIN,
            waypoints: vec![Point::new(LEG_LENGTH, offset as f64)],
            vertical_offset: offset,
        })
    }

    /// Angle between due east and the first leg, degrees.
    pub fn turn_angle(&self) -> f64 {
        let wp = self.waypoints[0];
        (wp.y - self.start.y).atan2(wp.x - self.start.x).to_degrees()
    }

    /// Overall bearing from the start to the final waypoint.
    pub fn bearing(&self) -> f64 {
        let end = self.waypoints.last().expect("course has at least one waypoint");
        bearing_between(self.start, *end).unwrap_or(0.0)
    }

    pub fn final_waypoint(&self) -> Point {
        *self.waypoints.last().expect("course has at least one waypoint")
    }

    /// Mirror image about the east-west axis.
    pub fn reflected(&self) -> Self {
        let flip = |p: Point| Point::new(p.x, -p.y);
        Self {
            start: flip(self.start),
            waypoints: self.waypoints.iter().copied().map(flip).collect(),
            vertical_offset: self.vertical_offset,
        }
    }
}

fn bearing_between(from: Point, to: Point) -> Result<f64> {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::CoincidentPoint);
    }
    Ok(wrap_360(dx.atan2(dy).to_degrees()))
}

/// Compass bearing from the boat to a waypoint, in `[0, 360)`.
pub fn desired_bearing(state: &BoatState, wp: Point) -> Result<f64> {
    bearing_between(state.pos, wp)
}

/// Signed smallest difference `desired - actual` in `(-180, 180]`; positive
/// means turn clockwise. The antipodal tie resolves to `+180`.
pub fn bearing_error(desired: f64, actual: f64) -> f64 {
    wrap_180(desired - actual)
}

/// Piecewise-linear map from apparent wind angle (degrees, 0..180) to a
/// fraction of wind speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Polar {
    points: Vec<(f64, f64)>,
}

impl Polar {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParams("polar needs at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidParams("polar angles must be strictly increasing".into()));
        }
        if points.iter().any(|&(_, f)| !(0.0..=1.0).contains(&f)) {
            return Err(Error::InvalidParams("polar fractions must lie in [0, 1]".into()));
        }
        Ok(Self { points })
    }

    /// Fraction at `angle`, held constant outside the table.
    pub fn fraction(&self, angle: f64) -> f64 {
        let pts = &self.points;
        let i = pts.partition_point(|&(a, _)| a <= angle);
        if i == 0 {
            return pts[0].1;
        }
        if i == pts.len() {
            return pts[pts.len() - 1].1;
        }
        let (a0, f0) = pts[i - 1];
        let (a1, f1) = pts[i];
        f0 + (f1 - f0) * (angle - a0) / (a1 - a0)
    }
}

impl Default for Polar {
    /// No-go below 30°, 0.5 on a beam reach, 0.4 running.
    fn default() -> Self {
        Self { points: vec![(0.0, 0.0), (30.0, 0.0), (90.0, 0.5), (180.0, 0.4)] }
    }
}

impl TryFrom<Vec<(f64, f64)>> for Polar {
    type Error = Error;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Polar> for Vec<(f64, f64)> {
    fn from(p: Polar) -> Self {
        p.points
    }
}

/// Absolute angle between where the wind comes from and the heading.
pub fn apparent_angle(wind_from: f64, heading: f64) -> f64 {
    wrap_180(wind_from - heading).abs()
}

pub fn polar_speed(apparent_angle: f64, wind_speed: f64, polar: &Polar) -> f64 {
    wind_speed * polar.fraction(apparent_angle)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimParams {
    pub dt: f64,
    pub timeout: f64,
    pub arrival_radius: f64,
    pub rudder_limit: f64,
    /// Degrees of heading change per degree of rudder per second.
    pub turn_gain: f64,
    pub polar: Polar,
    pub start_heading: f64,
    /// Stop at the turn waypoint instead of sailing both legs.
    pub single_leg: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            dt: 0.1,
            timeout: 600.0,
            arrival_radius: 5.0,
            rudder_limit: 45.0,
            turn_gain: 0.5,
            polar: Polar::default(),
            start_heading: 90.0,
            single_leg: false,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("timeout", self.timeout),
            ("arrival_radius", self.arrival_radius),
            ("rudder_limit", self.rudder_limit),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.turn_gain.is_finite() || !self.start_heading.is_finite() {
            return Err(Error::InvalidParams("turn_gain and start_heading must be finite".into()));
        }
        Ok(())
    }

    /// Number of steps a run may take before timing out.
    pub fn max_steps(&self) -> usize {
        ((self.timeout / self.dt - 1e-9).ceil() as usize).max(1)
    }

    pub fn course(&self, offset: u32) -> Result<Course> {
        if self.single_leg {
            Course::single_leg(offset)
        } else {
            Course::from_offset(offset)
        }
    }
}

/// Advances the boat by one `dt`: turn, look up speed, then translate.
pub fn step(state: &BoatState, rudder: f64, wind: &WindSample, params: &SimParams) -> BoatState {
    let heading = wrap_360(state.heading + params.turn_gain * rudder * params.dt);
    let speed = polar_speed(apparent_angle(wind.direction, heading), wind.speed, &params.polar);
    let (sin, cos) = heading.to_radians().sin_cos();
    let dist = speed * params.dt;
    BoatState {
        pos: Point::new(state.pos.x + dist * sin, state.pos.y + dist * cos),
        heading,
        speed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Completed,
    TimedOut,
}

/// Everything observed at one time step, before the physics update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub desired_bearing: f64,
    pub actual_bearing: f64,
    pub wind: WindSample,
    pub state: BoatState,
    pub rudder: f64,
}

impl StepRecord {
    pub fn error(&self) -> f64 {
        bearing_error(self.desired_bearing, self.actual_bearing)
    }
}

pub const RUN_LOG_HEADER: [&str; 10] =
    ["t", "desired_bearing", "actual_bearing", "wind_dir", "wind_speed", "x", "y", "heading", "speed", "rudder"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub records: Vec<StepRecord>,
    pub outcome: Outcome,
    pub dt: f64,
    /// Bearing from start to finish of the sailed course.
    pub course_bearing: f64,
}

impl RunLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.records.iter().map(StepRecord::error)
    }

    pub fn wind_samples(&self) -> impl Iterator<Item = WindSample> + '_ {
        self.records.iter().map(|r| r.wind)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RUN_LOG_HEADER)?;
        for r in &self.records {
            let fields = [
                r.t,
                r.desired_bearing,
                r.actual_bearing,
                r.wind.direction,
                r.wind.speed,
                r.state.pos.x,
                r.state.pos.y,
                r.state.heading,
                r.state.speed,
                r.rudder,
            ];
            w.write_record(fields.iter().map(f64::to_string))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a log written by [`RunLog::write_csv`].
    ///
    /// The CSV carries no outcome column: a log shorter than the step budget
    /// ended by arrival, and a full-length log is completed only if its
    /// replayed final step lands inside the arrival radius of the finish.
    pub fn read_csv<R: Read>(input: R, course: &Course, params: &SimParams) -> Result<Self> {
        let malformed = |reason: String| Error::MalformedLog { path: String::new(), reason };
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header != RUN_LOG_HEADER {
            return Err(malformed(format!("unexpected header {header:?}")));
        }
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let v: Vec<f64> = row
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| malformed(format!("field {f:?}: {e}"))))
                .collect::<Result<_>>()?;
            if v.len() != RUN_LOG_HEADER.len() {
                return Err(malformed(format!("row has {} fields", v.len())));
            }
            records.push(StepRecord {
                t: v[0],
                desired_bearing: v[1],
                actual_bearing: v[2],
                wind: WindSample { t: v[0], direction: v[3], speed: v[4] },
                state: BoatState { pos: Point::new(v[5], v[6]), heading: v[7], speed: v[8] },
                rudder: v[9],
            });
        }
        let last = records.last().ok_or(Error::EmptyLog)?;
        let outcome = if records.len() < params.max_steps() {
            Outcome::Completed
        } else {
            let after = step(&last.state, last.rudder, &last.wind, params);
            if after.pos.distance(&course.final_waypoint()) <= params.arrival_radius {
                Outcome::Completed
            } else {
                Outcome::TimedOut
            }
        };
        Ok(Self { records, outcome, dt: params.dt, course_bearing: course.bearing() })
    }
}

/// Runs one course with wind drawn from a seeded generator.
pub fn run_simulation(
    rb: &RuleBase,
    course: &Course,
    cfg: &WindConfig,
    wind_params: &WindParams,
    params: &SimParams,
    seed: u64,
) -> Result<RunLog> {
    params.validate()?;
    let wind = WindGenerator::new(seed, *cfg, *wind_params, params.dt)?;
    simulate(rb, course, params, wind)
}

/// Closed-loop simulation against any wind source (one sample per step).
pub fn simulate(
    rb: &RuleBase,
    course: &Course,
    params: &SimParams,
    mut wind: impl Iterator<Item = WindSample>,
) -> Result<RunLog> {
    params.validate()?;
    if course.waypoints.is_empty() {
        return Err(Error::InvalidParams("course has no waypoints".into()));
    }
    let max_steps = params.max_steps();
    let mut records = Vec::with_capacity(max_steps.min(8192));
    let mut state = BoatState { pos: course.start, heading: wrap_360(params.start_heading), speed: 0.0 };
    let mut wp_idx = 0;
    let mut prev_error: Option<f64> = None;
    let mut prev_desired = state.heading;
    let mut outcome = Outcome::TimedOut;

    for k in 0..max_steps {
        let Some(mut w) = wind.next() else {
            return Err(Error::InvalidParams("wind source ran out of samples".into()));
        };
        let t = k as f64 * params.dt;
        w.t = t;
        // sitting exactly on an uncredited waypoint: keep the previous bearing
        let desired = desired_bearing(&state, course.waypoints[wp_idx]).unwrap_or(prev_desired);
        let error = bearing_error(desired, state.heading);
        let derror = prev_error.map_or(0.0, |p| error - p);
        let rudder = rb.step(error, derror).clamp(-params.rudder_limit, params.rudder_limit);
        records.push(StepRecord { t, desired_bearing: desired, actual_bearing: state.heading, wind: w, state, rudder });

        state = step(&state, rudder, &w, params);
        prev_error = Some(error);
        prev_desired = desired;

        if state.pos.distance(&course.waypoints[wp_idx]) <= params.arrival_radius {
            wp_idx += 1;
            if wp_idx == course.waypoints.len() {
                outcome = Outcome::Completed;
                break;
            }
        }
    }

    Ok(RunLog { records, outcome, dt: params.dt, course_bearing: course.bearing() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn course_geometry() {
        let c25 = Course::from_offset(25).unwrap();
        assert!(close(c25.turn_angle(), 5.71, 0.005));
        let c50 = Course::from_offset(50).unwrap();
        assert_eq!(c50.waypoints[0], Point::new(250.0, 50.0));
        assert_eq!(c50.waypoints[1], Point::new(500.0, 0.0));
        assert!(close(c50.turn_angle(), 11.31, 0.005));
        let c100 = Course::from_offset(100).unwrap();
        assert!(close(c100.turn_angle(), 21.80, 0.005));
        assert_eq!(c100.bearing(), 90.0);
        assert!(matches!(Course::from_offset(30), Err(Error::InvalidOffset(30))));
        let single = Course::single_leg(100).unwrap();
        assert_eq!(single.waypoints.len(), 1);
        assert!(close(single.bearing(), 90.0 - 21.801_409_486_351_81, 1e-9));
    }

    #[test]
    fn desired_bearing_examples() {
        let s = BoatState { pos: Point::ORIGIN, heading: 0.0, speed: 0.0 };
        assert_eq!(desired_bearing(&s, Point::new(100.0, 0.0)).unwrap(), 90.0);
        assert_eq!(desired_bearing(&s, Point::new(0.0, 100.0)).unwrap(), 0.0);
        assert!(close(desired_bearing(&s, Point::new(100.0, 100.0)).unwrap(), 45.0, 1e-12));
        assert_eq!(desired_bearing(&s, Point::new(0.0, -5.0)).unwrap(), 180.0);
        assert!(close(desired_bearing(&s, Point::new(-1.0, 0.0)).unwrap(), 270.0, 1e-12));
        assert!(matches!(desired_bearing(&s, Point::ORIGIN), Err(Error::CoincidentPoint)));
    }

    #[test]
    fn bearing_error_examples() {
        assert_eq!(bearing_error(90.0, 80.0), 10.0);
        assert_eq!(bearing_error(10.0, 350.0), 20.0);
        assert_eq!(bearing_error(350.0, 10.0), -20.0);
        assert_eq!(bearing_error(0.0, 180.0), 180.0);
        assert_eq!(bearing_error(180.0, 0.0), 180.0);
    }

    #[test]
    fn polar_examples() {
        let p = Polar::default();
        assert_eq!(polar_speed(0.0, 10.0, &p), 0.0);
        assert_eq!(polar_speed(29.0, 10.0, &p), 0.0);
        assert_eq!(polar_speed(90.0, 10.0, &p), 5.0);
        assert!(close(polar_speed(180.0, 10.0, &p), 4.0, 1e-12));
        assert!(close(polar_speed(60.0, 10.0, &p), 2.5, 1e-12));
        assert!(Polar::new(vec![(0.0, 0.0)]).is_err());
        assert!(Polar::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(Polar::new(vec![(0.0, 0.0), (10.0, 1.5)]).is_err());
    }

    #[test]
    fn apparent_angle_is_symmetric() {
        assert_eq!(apparent_angle(180.0, 90.0), 90.0);
        assert_eq!(apparent_angle(0.0, 90.0), 90.0);
        assert_eq!(apparent_angle(10.0, 350.0), 20.0);
        assert_eq!(apparent_angle(180.0, 0.0), 180.0);
    }

    #[test]
    fn step_examples() {
        let p = SimParams::default();
        let s = BoatState { pos: Point::ORIGIN, heading: 90.0, speed: 0.0 };
        // wind from the west blows the boat east: dead run
        let astern = WindSample { t: 0.0, direction: 270.0, speed: 10.0 };
        let n = step(&s, 0.0, &astern, &p);
        assert_eq!(n.heading, 90.0);
        assert!(close(n.speed, 4.0, 1e-12));
        assert!(close(n.pos.x, 0.4, 1e-12));
        assert!(close(n.pos.y, 0.0, 1e-12));

        let turned = step(&s, 45.0, &astern, &p);
        assert!(close(turned.heading, 92.25, 1e-12));

        let calm = WindSample { t: 0.0, direction: 180.0, speed: 0.0 };
        let still = step(&s, 10.0, &calm, &p);
        assert_eq!(still.pos, s.pos);
        assert_eq!(still.speed, 0.0);
    }

    #[test]
    fn timeout_boundary() {
        let rb = RuleBase::with_fou(0.0).unwrap();
        let params = SimParams { timeout: 0.1, ..SimParams::default() };
        let cfg = WindConfig::parse("A").unwrap();
        let log =
            run_simulation(&rb, &Course::from_offset(25).unwrap(), &cfg, &WindParams::default(), &params, 1).unwrap();
        assert_eq!(log.outcome, Outcome::TimedOut);
        assert_eq!(log.len(), 1);
    }

    #[test]
    fn invalid_params() {
        let rb = RuleBase::with_fou(0.0).unwrap();
        let cfg = WindConfig::parse("A").unwrap();
        let course = Course::from_offset(25).unwrap();
        for params in [
            SimParams { dt: 0.0, ..SimParams::default() },
            SimParams { timeout: -1.0, ..SimParams::default() },
            SimParams { arrival_radius: 0.0, ..SimParams::default() },
            SimParams { dt: 0.3, ..SimParams::default() },
        ] {
            assert!(run_simulation(&rb, &course, &cfg, &WindParams::default(), &params, 0).is_err());
        }
    }

    #[test]
    fn run_log_csv_round_trip() {
        let rb = RuleBase::with_fou(10.0).unwrap();
        let params = SimParams::default();
        let course = Course::from_offset(50).unwrap();
        let cfg = WindConfig::parse("E").unwrap();
        let log = run_simulation(&rb, &course, &cfg, &WindParams::default(), &params, 9).unwrap();
        let mut buf = Vec::new();
        log.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with(
            "t,desired_bearing,actual_bearing,wind_dir,wind_speed,x,y,heading,speed,rudder\n"
        ));
        let back = RunLog::read_csv(buf.as_slice(), &course, &params).unwrap();
        assert_eq!(back, log);
    }

    #[test]
    fn read_rejects_bad_header() {
        let params = SimParams::default();
        let course = Course::from_offset(50).unwrap();
        assert!(RunLog::read_csv("a,b\n1,2\n".as_bytes(), &course, &params).is_err());
        let header_only = RUN_LOG_HEADER.join(",") + "\n";
        assert!(matches!(
            RunLog::read_csv(header_only.as_bytes(), &course, &params),
            Err(Error::EmptyLog)
        ));
    }
}
