use num_bigint::BigInt;
use num_traits::One;

/// Partitions of m as nonincreasing part lists, in lexicographically
/// decreasing order: [m] first, [1, …, 1] last.
pub fn partitions(m: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=max.min(remaining)).rev() {
            acc.push(part);
            rec(remaining - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// z_μ = Π_j j^{m_j} m_j!, with m_j the multiplicity of j in μ.
pub fn z_mu(mu: &[u32]) -> BigInt {
    let mut z = BigInt::one();
    let mut i = 0;
    while i < mu.len() {
        let part = mu[i];
        let mut mult = 0u32;
        while i < mu.len() && mu[i] == part {
            mult += 1;
            i += 1;
            z *= BigInt::from(part) * BigInt::from(mult);
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_four() {
        let expect: Vec<Vec<u32>> = vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]];
        assert_eq!(partitions(4), expect);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|m| partitions(m).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        // Σ_μ m!/z_μ counts permutations of m letters
        for m in 1..=7u32 {
            let fact: BigInt = (1..=m).map(BigInt::from).product();
            let total: BigInt = partitions(m).iter().map(|mu| &fact / z_mu(mu)).sum();
            assert_eq!(total, fact);
        }
        assert_eq!(z_mu(&[2, 2, 1]), BigInt::from(8));
    }
}
