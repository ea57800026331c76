//! Size caps for dense permutation domains.

use std::sync::OnceLock;

/// Default maximum number of points on a tree level or path set (3^9).
pub const DEFAULT_MAX_POINTS: usize = 19_683;

/// Environment variable overriding [`DEFAULT_MAX_POINTS`].
pub const MAX_POINTS_ENV: &str = "ARBOR_MAX_POINTS";

static MAX_POINTS: OnceLock<usize> = OnceLock::new();

/// The active point cap. Read once from `ARBOR_MAX_POINTS`, falling back to
/// the default when unset or unparsable.
pub fn max_points() -> usize {
    *MAX_POINTS.get_or_init(|| match std::env::var(MAX_POINTS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if n > DEFAULT_MAX_POINTS {
                    log::warn!(
                        "point cap raised to {n} (default {DEFAULT_MAX_POINTS}); dense permutations may use a lot of memory"
                    );
                }
                n
            }
            _ => {
                log::warn!("ignoring unparsable {MAX_POINTS_ENV}={raw:?}");
                DEFAULT_MAX_POINTS
            }
        },
        Err(_) => DEFAULT_MAX_POINTS,
    })
}
