//! Lightweight opt-in timers for development; enabled by setting
//! ZARISKI_PROFILE in the environment.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

pub static GROEBNER_NS: AtomicU64 = AtomicU64::new(0);
pub static GROEBNER_CALLS: AtomicU64 = AtomicU64::new(0);
pub static ELIMINATE_NS: AtomicU64 = AtomicU64::new(0);
pub static ELIMINATE_CALLS: AtomicU64 = AtomicU64::new(0);
pub static INTERSECT_NS: AtomicU64 = AtomicU64::new(0);
pub static INTERSECT_CALLS: AtomicU64 = AtomicU64::new(0);
pub static IMAGE_NS: AtomicU64 = AtomicU64::new(0);
pub static IMAGE_CALLS: AtomicU64 = AtomicU64::new(0);
pub static RADICAL_NS: AtomicU64 = AtomicU64::new(0);
pub static RADICAL_CALLS: AtomicU64 = AtomicU64::new(0);

pub struct Timer {
    start: Instant,
    sink: (&'static AtomicU64, &'static AtomicU64),
}

impl Timer {
    pub fn new(sink: (&'static AtomicU64, &'static AtomicU64)) -> Self {
        Timer {
            start: Instant::now(),
            sink,
        }
    }
}

impl Drop for Timer {
    fn drop(&mut self) {
        self.sink
            .0
            .fetch_add(self.start.elapsed().as_nanos() as u64, Ordering::Relaxed);
        self.sink.1.fetch_add(1, Ordering::Relaxed);
    }
}

pub fn report() {
    let ms = |a: &AtomicU64| a.load(Ordering::Relaxed) / 1_000_000;
    eprintln!(
        "profile: groebner {} ms / {} calls; eliminate {} ms / {}; intersect {} ms / {}; image {} ms / {}; radical {} ms / {}",
        ms(&GROEBNER_NS),
        GROEBNER_CALLS.load(Ordering::Relaxed),
        ms(&ELIMINATE_NS),
        ELIMINATE_CALLS.load(Ordering::Relaxed),
        ms(&INTERSECT_NS),
        INTERSECT_CALLS.load(Ordering::Relaxed),
        ms(&IMAGE_NS),
        IMAGE_CALLS.load(Ordering::Relaxed),
        ms(&RADICAL_NS),
        RADICAL_CALLS.load(Ordering::Relaxed),
    );
}
