//! Bounded retry with exponential backoff for transport-level failures.

use std::time::Duration;

use crate::schema::RetryConfig;

use super::ProviderError;

/// Runs `attempt` up to `config.max_attempts` times, backing off between
/// tries. Only transport errors are retried; provider and auth errors
/// surface immediately.
pub fn with_retries<T>(
    config: &RetryConfig,
    mut attempt: impl FnMut() -> Result<T, ProviderError>,
) -> Result<T, ProviderError> {
    let budget = config.max_attempts.max(1);
    let mut last_message = String::new();
    for n in 1..=budget {
        match attempt() {
            Ok(value) => return Ok(value),
            Err(ProviderError::Transport { message, .. }) => {
                last_message = message;
                if n < budget {
                    let delay = config.base_delay_ms.saturating_mul(1 << (n - 1).min(10));
                    if delay > 0 {
                        std::thread::sleep(Duration::from_millis(delay));
                    }
                }
            }
            Err(other) => return Err(other),
        }
    }
    Err(ProviderError::Transport { message: last_message, attempts: budget })
}

#[cfg(test)]
mod tests {
    use std::sync::atomic::{AtomicU32, Ordering};

    use super::*;

    fn no_delay(max_attempts: u32) -> RetryConfig {
        RetryConfig { max_attempts, base_delay_ms: 0 }
    }

    #[test]
    fn transient_failure_then_success_within_budget() {
        let calls = AtomicU32::new(0);
        let out = with_retries(&no_delay(2), || {
            let n = calls.fetch_add(1, Ordering::SeqCst) + 1;
            if n == 1 {
                Err(ProviderError::Transport { message: "reset".into(), attempts: 1 })
            } else {
                Ok("done")
            }
        })
        .unwrap();
        assert_eq!(out, "done");
        assert_eq!(calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn exhausted_budget_reports_attempt_count() {
        let calls = AtomicU32::new(0);
        let err = with_retries::<()>(&no_delay(3), || {
            calls.fetch_add(1, Ordering::SeqCst);
            Err(ProviderError::Transport { message: "down".into(), attempts: 1 })
        })
        .unwrap_err();
        assert_eq!(calls.load(Ordering::SeqCst), 3);
        match err {
            ProviderError::Transport { attempts, .. } => assert_eq!(attempts, 3),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn provider_errors_are_not_retried() {
        let calls = AtomicU32::new(0);
        let err = with_retries::<()>(&no_delay(5), || {
            calls.fetch_add(1, Ordering::SeqCst);
            Err(ProviderError::Provider { provider: "p".into(), message: "bad".into() })
        })
        .unwrap_err();
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        assert!(matches!(err, ProviderError::Provider { .. }));
    }

    #[test]
    fn never_exceeds_budget() {
        for budget in 1..6u32 {
            let calls = AtomicU32::new(0);
            let _ = with_retries::<()>(&no_delay(budget), || {
                calls.fetch_add(1, Ordering::SeqCst);
                Err(ProviderError::Transport { message: "x".into(), attempts: 1 })
            });
            assert_eq!(calls.load(Ordering::SeqCst), budget);
        }
    }
}
