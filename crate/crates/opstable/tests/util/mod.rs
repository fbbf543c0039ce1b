//! Small dense-matrix helpers for building conjugated test exponents.

/// Row-major square matrix of size 2 or 3.
#[derive(Debug, Clone)]
pub struct Mat {
    pub n: usize,
    pub e: Vec<f64>,
}

impl Mat {
    pub fn diag(d: &[f64]) -> Mat {
        let n = d.len();
        let mut e = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            e[i * n + i] = v;
        }
        Mat { n, e }
    }

    pub fn new2(a: f64, b: f64, c: f64, d: f64) -> Mat {
        Mat {
            n: 2,
            e: vec![a, b, c, d],
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                for j in 0..n {
                    e[i * n + j] += a * other.e[k * n + j];
                }
            }
        }
        Mat { n, e }
    }

    pub fn inverse(&self) -> Mat {
        let n = self.n;
        match n {
            2 => {
                let [a, b, c, d] = [self.e[0], self.e[1], self.e[2], self.e[3]];
                let det = a * d - b * c;
                Mat {
                    n,
                    e: vec![d / det, -b / det, -c / det, a / det],
                }
            }
            3 => {
                let m = |i: usize, j: usize| self.e[i * 3 + j];
                let cof = |i0: usize, i1: usize, j0: usize, j1: usize| {
                    m(i0, j0) * m(i1, j1) - m(i0, j1) * m(i1, j0)
                };
                let det = m(0, 0) * cof(1, 2, 1, 2) - m(0, 1) * cof(1, 2, 0, 2)
                    + m(0, 2) * cof(1, 2, 0, 1);
                let adj = [
                    cof(1, 2, 1, 2),
                    -cof(0, 2, 1, 2),
                    cof(0, 1, 1, 2),
                    -cof(1, 2, 0, 2),
                    cof(0, 2, 0, 2),
                    -cof(0, 1, 0, 2),
                    cof(1, 2, 0, 1),
                    -cof(0, 2, 0, 1),
                    cof(0, 1, 0, 1),
                ];
                Mat {
                    n,
                    e: adj.iter().map(|v| v / det).collect(),
                }
            }
            _ => panic!("only 2x2 and 3x3"),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.e.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

pub fn rotation2(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::new2(c, -s, s, c)
}

pub fn rotation3(a: f64, b: f64, c: f64) -> Mat {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sc, cc) = c.sin_cos();
    let rx = Mat {
        n: 3,
        e: vec![1.0, 0.0, 0.0, 0.0, ca, -sa, 0.0, sa, ca],
    };
    let ry = Mat {
        n: 3,
        e: vec![cb, 0.0, sb, 0.0, 1.0, 0.0, -sb, 0.0, cb],
    };
    let rz = Mat {
        n: 3,
        e: vec![cc, -sc, 0.0, sc, cc, 0.0, 0.0, 0.0, 1.0],
    };
    rx.mul(&ry).mul(&rz)
}

/// `P B P^{-1}`.
pub fn conjugate(p: &Mat, b: &Mat) -> Mat {
    p.mul(b).mul(&p.inverse())
}
