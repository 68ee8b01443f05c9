//! Random-waypoint mobility. Each node alternates between pausing and
//! gliding toward a uniformly drawn waypoint at a uniformly drawn speed.
//! Movement is quantized: a node's position only changes at wake events,
//! advancing at most `granularity_m` metres per wake, so neighbor sets
//! recomputed at wakes track the continuous trajectory closely.

use rand::Rng;

/// Microseconds per second, the engine's clock unit.
pub const US_PER_S: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaypointParams {
    pub terrain: (f64, f64),
    pub pause_s: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub granularity_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Paused,
    Moving { target: (f64, f64), speed: f64 },
}

/// Per-node waypoint state. Drive it by calling [`Waypoint::wake`] at the
/// time it returned for the previous wake.
#[derive(Debug, Clone)]
pub struct Waypoint {
    params: WaypointParams,
    phase: Phase,
}

impl Waypoint {
    /// A node starts out pausing at its initial position; the first wake is
    /// due once that pause elapses. Returns `None` for an immobile node
    /// (`v_max == 0`), which never needs waking.
    pub fn new(params: WaypointParams) -> (Self, Option<u64>) {
        let first = if params.v_max > 0.0 {
            Some((params.pause_s * US_PER_S as f64).round() as u64)
        } else {
            None
        };
        (
            Self {
                params,
                phase: Phase::Paused,
            },
            first,
        )
    }

    /// Handle a wake at `now_us`: either pick the next waypoint (pause just
    /// ended) or advance one movement quantum. Returns the next wake time.
    pub fn wake(&mut self, pos: &mut (f64, f64), now_us: u64, rng: &mut impl Rng) -> u64 {
        match self.phase {
            Phase::Paused => {
                let target = (
                    rng.gen_range(0.0..=self.params.terrain.0),
                    rng.gen_range(0.0..=self.params.terrain.1),
                );
                let speed = rng
                    .gen_range(self.params.v_min..=self.params.v_max)
                    .max(0.01);
                self.phase = Phase::Moving { target, speed };
                now_us + self.step_dt_us(*pos, target, speed)
            }
            Phase::Moving { target, speed } => {
                let dx = target.0 - pos.0;
                let dy = target.1 - pos.1;
                let dist = (dx * dx + dy * dy).sqrt();
                if dist <= self.params.granularity_m {
                    *pos = target;
                    self.phase = Phase::Paused;
                    now_us + (self.params.pause_s * US_PER_S as f64).round() as u64
                } else {
                    let step = self.params.granularity_m / dist;
                    pos.0 += dx * step;
                    pos.1 += dy * step;
                    now_us + self.step_dt_us(*pos, target, speed)
                }
            }
        }
    }

    /// Time to cover the next quantum (or the remaining distance, if
    /// shorter) at `speed`.
    fn step_dt_us(&self, pos: (f64, f64), target: (f64, f64), speed: f64) -> u64 {
        let dx = target.0 - pos.0;
        let dy = target.1 - pos.1;
        let dist = (dx * dx + dy * dy).sqrt();
        let step = dist.min(self.params.granularity_m);
        ((step / speed) * US_PER_S as f64).round().max(1.0) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params() -> WaypointParams {
        WaypointParams {
            terrain: (1250.0, 1250.0),
            pause_s: 30.0,
            v_min: 0.0,
            v_max: 10.0,
            granularity_m: 0.5,
        }
    }

    #[test]
    fn immobile_nodes_never_wake() {
        let (_, first) = Waypoint::new(WaypointParams {
            v_max: 0.0,
            ..params()
        });
        assert_eq!(first, None);
    }

    #[test]
    fn first_wake_lands_at_pause_end() {
        let (_, first) = Waypoint::new(params());
        assert_eq!(first, Some(30 * US_PER_S));
    }

    #[test]
    fn each_wake_moves_at_most_one_quantum() {
        let (mut wp, first) = Waypoint::new(params());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut pos = (625.0, 625.0);
        let mut now = first.unwrap();
        for _ in 0..200 {
            let before = pos;
            let next = wp.wake(&mut pos, now, &mut rng);
            let dx = pos.0 - before.0;
            let dy = pos.1 - before.1;
            assert!((dx * dx + dy * dy).sqrt() <= 0.5 + 1e-9);
            assert!(next > now);
            now = next;
        }
    }

    #[test]
    fn node_arrives_exactly_at_its_waypoint_then_pauses() {
        let (mut wp, first) = Waypoint::new(params());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pos = (0.0, 0.0);
        let mut now = first.unwrap();
        // First wake picks the target; remember it by peeking at the phase
        now = wp.wake(&mut pos, now, &mut rng);
        let Phase::Moving { target, speed } = wp.phase else {
            panic!("expected to start moving");
        };
        assert!((0.01..=10.0).contains(&speed));
        loop {
            now = wp.wake(&mut pos, now, &mut rng);
            if wp.phase == Phase::Paused {
                break;
            }
        }
        assert_eq!(pos, target);
        assert!((0.0..=1250.0).contains(&pos.0));
        assert!((0.0..=1250.0).contains(&pos.1));
    }

    #[test]
    fn displacement_respects_top_speed() {
        let (mut wp, first) = Waypoint::new(params());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pos = (100.0, 100.0);
        let start = pos;
        let mut now = first.unwrap();
        let horizon = now + 120 * US_PER_S;
        while now < horizon {
            now = wp.wake(&mut pos, now, &mut rng);
        }
        let dx = pos.0 - start.0;
        let dy = pos.1 - start.1;
        let elapsed_s = (now - first.unwrap()) as f64 / US_PER_S as f64;
        assert!((dx * dx + dy * dy).sqrt() <= 10.0 * elapsed_s + 0.5);
    }

    #[test]
    fn same_seed_reproduces_the_same_trajectory() {
        let run = |seed: u64| {
            let (mut wp, first) = Waypoint::new(params());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pos = (10.0, 20.0);
            let mut now = first.unwrap();
            for _ in 0..500 {
                now = wp.wake(&mut pos, now, &mut rng);
            }
            (pos, now)
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }
}
