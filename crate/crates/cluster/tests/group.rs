use heatcorr_cluster::group_elements;
use heatcorr_lattice::Site;
use proptest::prelude::*;

proptest! {
    #[test]
    fn group_is_closed_and_signed(n in 2usize..6, seed in any::<u64>()) {
        let sites: Vec<Site> = (0..n as i64).map(Site::scalar).collect();
        let a = (seed % n as u64) as usize;
        let b = (a + 1 + (seed / 7 % (n as u64 - 1)) as usize) % n;
        let g = group_elements(&sites, &[sites[a].clone()], &[sites[b].clone()]).unwrap();
        prop_assert_eq!(g.len(), 1 << n);
        for x in &g {
            prop_assert_eq!(x.sign == -1, x.swaps[a] != x.swaps[b]);
            for y in &g {
                let swaps: Vec<bool> = x.swaps.iter().zip(&y.swaps).map(|(p, q)| p ^ q).collect();
                let prod = g.iter().find(|z| z.swaps == swaps);
                prop_assert!(prod.is_some());
                prop_assert_eq!(prod.unwrap().sign, x.sign * y.sign);
            }
        }
    }
}

#[test]
fn full_supports_give_four_elements() {
    let sites: Vec<Site> = (0..3).map(Site::scalar).collect();
    let g = group_elements(&sites, &sites[..2], &sites[2..]).unwrap();
    assert_eq!(g.len(), 4);
}
