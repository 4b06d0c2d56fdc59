use super::lz78::lz78_bits;
use super::special::igamc;
use super::{TestEntry, TestVerdict};

const MIN_LEN: usize = 100;
const COMPRESSION_MIN_LEN: usize = 1000;

/// Excess of ones, two-sided normal approximation.
pub fn frequency_test(bits: &[bool], alpha: f64) -> TestEntry {
    let n = bits.len();
    if n < MIN_LEN {
        return TestEntry::insufficient("frequency", MIN_LEN, n);
    }
    let s: i64 = bits.iter().map(|&b| if b { 1 } else { -1 }).sum();
    let s_obs = s.unsigned_abs() as f64 / libm::sqrt(n as f64);
    TestEntry::from_p("frequency", s_obs, libm::erfc(s_obs / core::f64::consts::SQRT_2), alpha)
}

/// Number of runs against its expectation given the observed proportion of
/// ones. Streams whose proportion is too far from 1/2 fail outright.
pub fn runs_test(bits: &[bool], alpha: f64) -> TestEntry {
    let n = bits.len();
    if n < MIN_LEN {
        return TestEntry::insufficient("runs", MIN_LEN, n);
    }
    let nf = n as f64;
    let pi = bits.iter().filter(|&&b| b).count() as f64 / nf;
    let tau = 2.0 / libm::sqrt(nf);
    if (pi - 0.5).abs() >= tau {
        return TestEntry {
            test: "runs".into(),
            statistic: None,
            p_value: Some(0.0),
            threshold: Some(alpha),
            verdict: TestVerdict::Fail,
            detail: Some(alloc::format!("proportion of ones {pi} too far from 1/2 for the runs test")),
        };
    }
    let v = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let v = v as f64;
    let q = pi * (1.0 - pi);
    let p = libm::erfc((v - 2.0 * nf * q).abs() / (2.0 * libm::sqrt(2.0 * nf) * q));
    TestEntry::from_p("runs", v, p, alpha)
}

fn block_counts(bits: &[bool], m: usize) -> (usize, alloc::vec::Vec<u64>) {
    let blocks = bits.len() / m;
    let mut counts = alloc::vec![0u64; 1 << m];
    for chunk in bits.chunks_exact(m) {
        let v = chunk.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        counts[v] += 1;
    }
    (blocks, counts)
}

fn required_len(m: u32) -> usize {
    MIN_LEN.saturating_mul(1usize.checked_shl(m).unwrap_or(usize::MAX))
}

/// Chi-square of non-overlapping `block_len`-bit block counts against the
/// uniform distribution.
pub fn block_test(bits: &[bool], block_len: u32, alpha: f64) -> TestEntry {
    let name = alloc::format!("block-{block_len}");
    let n = bits.len();
    let need = required_len(block_len);
    if block_len == 0 || block_len >= usize::BITS || n < need {
        return TestEntry::insufficient(&name, need, n);
    }
    let m = block_len as usize;
    let (blocks, counts) = block_counts(bits, m);
    let expected = blocks as f64 / (1u64 << m) as f64;
    let chi: f64 = counts.iter().map(|&c| (c as f64 - expected) * (c as f64 - expected) / expected).sum();
    let df = ((1u64 << m) - 1) as f64;
    TestEntry::from_p(&name, chi, igamc(df / 2.0, chi / 2.0), alpha)
}

/// For each `m` in `1..=max_block`, every `m`-bit block frequency (over
/// non-overlapping blocks) must lie within `sqrt(log2(N) / N)` of `2^-m`,
/// where `N` is the number of blocks. The statistic is the largest ratio of
/// deviation to bound; the test fails when it reaches 1.
pub fn borel_normality_test(bits: &[bool], max_block: u32) -> TestEntry {
    let name = alloc::format!("borel-normality-{max_block}");
    let n = bits.len();
    let need = required_len(max_block);
    if max_block == 0 || max_block >= usize::BITS || n < need {
        return TestEntry::insufficient(&name, need, n);
    }
    let mut worst = 0.0f64;
    let mut worst_at = None;
    for m in 1..=max_block as usize {
        let (blocks, counts) = block_counts(bits, m);
        let nb = blocks as f64;
        let bound = libm::sqrt(libm::log2(nb) / nb);
        let target = 1.0 / (1u64 << m) as f64;
        for (v, &c) in counts.iter().enumerate() {
            let ratio = (c as f64 / nb - target).abs() / bound;
            if ratio > worst {
                worst = ratio;
                worst_at = Some((m, v));
            }
        }
    }
    TestEntry {
        test: name,
        statistic: Some(worst),
        p_value: None,
        threshold: Some(1.0),
        verdict: if worst < 1.0 { TestVerdict::Pass } else { TestVerdict::Fail },
        detail: worst_at.map(|(m, v)| alloc::format!("largest deviation at block {v:0m$b}", m = m)),
    }
}

/// LZ78 output length over input length. Never a verdict.
pub fn compression_proxy(bits: &[bool]) -> TestEntry {
    let n = bits.len();
    if n < COMPRESSION_MIN_LEN {
        return TestEntry::insufficient("compression-lz78", COMPRESSION_MIN_LEN, n);
    }
    TestEntry {
        test: "compression-lz78".into(),
        statistic: Some(lz78_bits(bits) as f64 / n as f64),
        p_value: None,
        threshold: None,
        verdict: TestVerdict::Descriptive,
        detail: Some("descriptive ratio only, not an incompressibility verdict".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::reference_stream;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn zeros(n: usize) -> Vec<bool> {
        alloc::vec![false; n]
    }
    fn periodic(pattern: &str, n: usize) -> Vec<bool> {
        pattern.chars().cycle().take(n).map(|c| c == '1').collect()
    }
    fn close(a: Option<f64>, b: f64, tol: f64) -> bool {
        a.is_some_and(|a| (a - b).abs() < tol)
    }

    #[test]
    fn frequency() {
        assert_eq!(frequency_test(&zeros(10_000), 0.01).verdict, TestVerdict::Fail);
        let half: Vec<bool> = (0..10_000).map(|i| i >= 5000).collect();
        assert_eq!(frequency_test(&half, 0.01).verdict, TestVerdict::Pass);
        let e = frequency_test(&reference_stream(1, 10_000), 0.01);
        assert_eq!(e.verdict, TestVerdict::Pass);
        assert!(close(e.statistic, 0.12, 1e-12));
        assert!(close(e.p_value, 0.9044831479588323, 1e-12));
        assert_eq!(frequency_test(&zeros(99), 0.01).verdict, TestVerdict::InsufficientLength);
    }

    #[test]
    fn runs() {
        assert_eq!(runs_test(&periodic("01", 10_000), 0.01).verdict, TestVerdict::Fail);
        assert_eq!(runs_test(&periodic("1", 10_000), 0.01).verdict, TestVerdict::Fail);
        let half: Vec<bool> = (0..10_000).map(|i| i >= 5000).collect();
        assert_eq!(runs_test(&half, 0.01).verdict, TestVerdict::Fail);
        let e = runs_test(&reference_stream(1, 10_000), 0.01);
        assert_eq!(e.verdict, TestVerdict::Pass);
        assert_eq!(e.statistic, Some(4994.0));
        assert!(close(e.p_value, 0.9045970833213994, 1e-12));
    }

    #[test]
    fn blocks() {
        assert_eq!(block_test(&periodic("00", 10_000), 2, 0.01).verdict, TestVerdict::Fail);
        let e = block_test(&reference_stream(1, 10_000), 3, 0.01);
        assert_eq!(e.verdict, TestVerdict::Pass);
        assert!(close(e.statistic, 10.349534953495349, 1e-9));
        assert!(close(e.p_value, 0.16961568658466114, 1e-9));
        assert_eq!(block_test(&reference_stream(1, 10_000), 7, 0.01).verdict, TestVerdict::InsufficientLength);
    }

    #[test]
    fn borel() {
        let e = borel_normality_test(&zeros(10_000), 1);
        assert_eq!(e.verdict, TestVerdict::Fail);
        assert_eq!(borel_normality_test(&periodic("0011", 10_000), 2).verdict, TestVerdict::Fail);
        // Non-overlapping 1-blocks of "0011" are balanced; the failure is at m=2.
        assert_eq!(borel_normality_test(&periodic("0011", 10_000), 1).verdict, TestVerdict::Pass);
        // Largest deviation / bound, frozen from an independent computation
        // (m = 4: 0.0012626648 / 0.0082864076).
        let e = borel_normality_test(&reference_stream(1, 1 << 20), 4);
        assert_eq!(e.verdict, TestVerdict::Pass);
        assert!(close(e.statistic, 0.001262664794921875 / 0.008286407592029853, 1e-9));
        assert_eq!(borel_normality_test(&zeros(1000), 4).verdict, TestVerdict::InsufficientLength);
    }

    #[test]
    fn compression() {
        let e = compression_proxy(&zeros(10_000));
        assert_eq!(e.verdict, TestVerdict::Descriptive);
        assert!(close(e.statistic, 0.1013, 1e-12));
        assert!(close(compression_proxy(&periodic("01", 10_000)).statistic, 0.1536, 1e-12));
        assert!(close(compression_proxy(&reference_stream(1, 10_000)).statistic, 1.2076, 1e-12));
        assert_eq!(compression_proxy(&zeros(999)).verdict, TestVerdict::InsufficientLength);
    }

    proptest! {
        #[test]
        fn constant_streams_fail_everything(n in 1600usize..5000, one in any::<bool>()) {
            let s = alloc::vec![one; n];
            prop_assert_eq!(frequency_test(&s, 0.01).verdict, TestVerdict::Fail);
            prop_assert_eq!(runs_test(&s, 0.01).verdict, TestVerdict::Fail);
            prop_assert_eq!(block_test(&s, 3, 0.01).verdict, TestVerdict::Fail);
            prop_assert_eq!(borel_normality_test(&s, 4).verdict, TestVerdict::Fail);
            prop_assert_eq!(compression_proxy(&s).verdict, TestVerdict::Descriptive);
        }

        #[test]
        fn verdicts_are_pure(seed in any::<u64>()) {
            let s = reference_stream(seed, 2000);
            prop_assert_eq!(frequency_test(&s, 0.01), frequency_test(&s, 0.01));
            prop_assert_eq!(block_test(&s, 3, 0.01), block_test(&s, 3, 0.01));
        }
    }
}
