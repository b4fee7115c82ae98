//! Union-find over integer unknowns with difference constraints `x_v - x_u = w`.

use num_integer::Integer;

pub(crate) struct OffsetUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    // x_v - x_parent(v)
    offset: Vec<i64>,
    defect_gcd: u64,
}

impl OffsetUnionFind {
    pub fn new(n: usize) -> Self {
        OffsetUnionFind { parent: (0..n).collect(), size: vec![1; n], offset: vec![0; n], defect_gcd: 0 }
    }

    /// Root of `v` and `x_v - x_root`.
    pub fn find(&mut self, v: usize) -> (usize, i64) {
        let mut path = Vec::new();
        let mut cur = v;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // compress from the top of the path down
        let mut acc = 0;
        for &node in path.iter().rev() {
            acc += self.offset[node];
            self.offset[node] = acc;
            self.parent[node] = root;
        }
        (root, if v == root { 0 } else { self.offset[v] })
    }

    /// Records `x_v - x_u = w`. A contradiction feeds its defect into the gcd.
    pub fn relate(&mut self, u: usize, v: usize, w: i64) {
        let (ru, pu) = self.find(u);
        let (rv, pv) = self.find(v);
        if ru == rv {
            let defect = (pv - pu - w).unsigned_abs();
            self.defect_gcd = self.defect_gcd.gcd(&defect);
            return;
        }
        // x_rv - x_ru = w + pu - pv
        let d = w + pu - pv;
        if self.size[ru] >= self.size[rv] {
            self.parent[rv] = ru;
            self.offset[rv] = d;
            self.size[ru] += self.size[rv];
        } else {
            self.parent[ru] = rv;
            self.offset[ru] = -d;
            self.size[rv] += self.size[ru];
        }
    }

    /// gcd of all cycle defects seen so far; 0 means consistent over the integers.
    pub fn defect_gcd(&self) -> u64 {
        self.defect_gcd
    }
}
