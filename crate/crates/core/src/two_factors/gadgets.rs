//! Explicit gadget decompositions: small orders come from fixed tables,
//! larger orders from edge lists that depend on the parity of `m`.

use super::{Flavor, JGadget, Result, TwoFactorError};
use crate::graphs::{edge, Edge};

/// Edges of the closed walk through `vs`.
fn cyc(vs: &[u32]) -> Vec<Edge> {
    (0..vs.len())
        .map(|k| edge(vs[k], vs[(k + 1) % vs.len()]))
        .collect()
}

/// `{i, i + d}` for `i = from, from + step, ..` while `i <= to`.
fn run(from: i64, to: i64, step: usize, d: u32) -> Vec<Edge> {
    (from..=to)
        .step_by(step)
        .map(|i| edge(i as u32, i as u32 + d))
        .collect()
}

fn pairs(list: &[(u32, u32)]) -> Vec<Edge> {
    list.iter().map(|&(u, v)| edge(u, v)).collect()
}

fn cat(parts: Vec<Vec<Edge>>) -> Vec<Edge> {
    parts.concat()
}

fn checked(flavor: Flavor, m: u32, parts: [Vec<Edge>; 3], expected: &[u32]) -> Result<JGadget> {
    let g = JGadget::new(flavor, m, parts)?;
    let mut want = expected.to_vec();
    want.sort_unstable();
    if g.cycle_type().lengths() != want.as_slice() {
        return Err(TwoFactorError::InvalidGadget {
            flavor,
            m,
            part: 1,
            reason: format!(
                "cycle type {} differs from the claimed {want:?}",
                g.cycle_type()
            ),
        });
    }
    Ok(g)
}

/// `J_m^{1,2,3}` decomposed into three `m`-cycles, for `m >= 4`.
pub fn j123_cycle(m: u32) -> Result<JGadget> {
    let parts = match m {
        0..=3 => {
            return Err(TwoFactorError::Unsupported {
                what: "j123 single cycle",
                m,
                range: "m >= 4",
            })
        }
        4 => [cyc(&[0, 1, 2, 3]), cyc(&[1, 3, 6, 4]), cyc(&[2, 4, 3, 5])],
        5 => [
            cyc(&[0, 1, 2, 4, 3]),
            cyc(&[1, 3, 5, 7, 4]),
            cyc(&[2, 3, 6, 4, 5]),
        ],
        6 => [
            cyc(&[0, 1, 2, 5, 4, 3]),
            cyc(&[1, 3, 5, 8, 6, 4]),
            cyc(&[2, 4, 7, 5, 6, 3]),
        ],
        _ if m % 2 == 1 => {
            let k = m as i64;
            [
                cat(vec![
                    pairs(&[(0, 1), (1, 2), (0, 3), (m - 2, m - 1)]),
                    run(2, k - 3, 1, 2),
                ]),
                cat(vec![
                    pairs(&[(1, 3), (m - 2, m), (m, m + 2), (m - 1, m + 2)]),
                    run(4, k - 3, 2, 1),
                    run(1, k - 4, 2, 3),
                ]),
                cat(vec![
                    pairs(&[(2, 3), (m - 2, m + 1), (m - 1, m), (m - 1, m + 1)]),
                    run(3, k - 4, 2, 1),
                    run(2, k - 3, 2, 3),
                ]),
            ]
        }
        _ => {
            let k = m as i64;
            [
                cat(vec![
                    pairs(&[(0, 1), (1, 2), (3, 4), (0, 3), (2, 5), (m - 2, m - 1)]),
                    run(4, k - 3, 1, 2),
                ]),
                cat(vec![
                    pairs(&[
                        (1, 3),
                        (1, 4),
                        (3, 5),
                        (m - 2, m),
                        (m, m + 2),
                        (m - 1, m + 2),
                    ]),
                    run(5, k - 3, 2, 1),
                    run(4, k - 4, 2, 3),
                ]),
                cat(vec![
                    pairs(&[(2, 4), (m - 2, m + 1), (m - 1, m), (m - 1, m + 1)]),
                    run(2, k - 4, 2, 1),
                    run(3, k - 3, 2, 3),
                ]),
            ]
        }
    };
    checked(Flavor::J123, m, parts, &[m])
}

/// `J_m^{1,2,3}` decomposed into copies of `C_3 ∪ C_(m-3)`, for `m = 8` or
/// `m >= 10`.
pub fn j123_c3(m: u32) -> Result<JGadget> {
    let parts = match m {
        8 => [
            cat(vec![cyc(&[4, 6, 7]), cyc(&[0, 1, 2, 5, 3])]),
            cat(vec![cyc(&[7, 8, 10]), cyc(&[1, 3, 6, 5, 4])]),
            cat(vec![cyc(&[2, 3, 4]), cyc(&[5, 7, 9, 6, 8])]),
        ],
        10 => [
            cat(vec![cyc(&[7, 8, 9]), cyc(&[0, 1, 2, 4, 5, 6, 3])]),
            cat(vec![cyc(&[1, 3, 4]), cyc(&[5, 7, 6, 9, 12, 10, 8])]),
            cat(vec![cyc(&[2, 3, 5]), cyc(&[4, 6, 8, 11, 9, 10, 7])]),
        ],
        11 => [
            cat(vec![cyc(&[8, 9, 10]), cyc(&[0, 1, 2, 4, 5, 7, 6, 3])]),
            cat(vec![cyc(&[1, 3, 4]), cyc(&[5, 6, 9, 11, 13, 10, 7, 8])]),
            cat(vec![cyc(&[2, 3, 5]), cyc(&[4, 6, 8, 11, 10, 12, 9, 7])]),
        ],
        _ if m >= 12 => {
            let k = m as i64;
            let h3 = cat(vec![
                cyc(&[2, 3, 5]),
                pairs(&[
                    (4, 6),
                    (4, 7),
                    (m - 2, m + 1),
                    (m - 3, m),
                    (m - 1, m),
                    (m - 1, m + 1),
                ]),
                run(6, k - 4, 1, 2),
            ]);
            if m.is_multiple_of(2) {
                [
                    cat(vec![
                        cyc(&[m - 3, m - 2, m - 1]),
                        pairs(&[(0, 1), (0, 3), (1, 2), (2, 4), (m - 5, m - 4)]),
                        run(4, k - 6, 2, 1),
                        run(3, k - 7, 2, 3),
                    ]),
                    cat(vec![
                        cyc(&[1, 3, 4]),
                        pairs(&[
                            (5, 7),
                            (m - 5, m - 2),
                            (m - 4, m - 3),
                            (m - 2, m),
                            (m, m + 2),
                            (m - 1, m + 2),
                        ]),
                        run(5, k - 7, 2, 1),
                        run(6, k - 4, 2, 3),
                    ]),
                    h3,
                ]
            } else {
                [
                    cat(vec![
                        cyc(&[m - 3, m - 2, m - 1]),
                        pairs(&[
                            (0, 1),
                            (0, 3),
                            (1, 2),
                            (2, 4),
                            (3, 6),
                            (4, 5),
                            (5, 7),
                            (m - 5, m - 4),
                        ]),
                        run(7, k - 6, 2, 1),
                        run(6, k - 7, 2, 3),
                    ]),
                    cat(vec![
                        cyc(&[1, 3, 4]),
                        pairs(&[
                            (5, 6),
                            (m - 5, m - 2),
                            (m - 4, m - 3),
                            (m - 2, m),
                            (m, m + 2),
                            (m - 1, m + 2),
                        ]),
                        run(6, k - 7, 2, 1),
                        run(5, k - 4, 2, 3),
                    ]),
                    h3,
                ]
            }
        }
        _ => {
            return Err(TwoFactorError::Unsupported {
                what: "j123 triangle plus cycle",
                m,
                range: "m = 8 or m >= 10",
            })
        }
    };
    checked(Flavor::J123, m, parts, &[3, m.saturating_sub(3)])
}

/// `J_m^{1,3,4}` decomposed into three `m`-cycles, for `m` in `{6, 7}` or
/// `m >= 9`.
pub fn j134_cycle(m: u32) -> Result<JGadget> {
    let parts = match m {
        6 => [
            cyc(&[0, 1, 5, 2, 3, 4]),
            cyc(&[1, 2, 6, 9, 5, 4]),
            cyc(&[3, 6, 5, 8, 4, 7]),
        ],
        7 => [
            cyc(&[0, 1, 2, 3, 6, 5, 4]),
            cyc(&[1, 4, 7, 10, 6, 2, 5]),
            cyc(&[3, 4, 8, 5, 9, 6, 7]),
        ],
        9 => [
            cyc(&[0, 1, 2, 3, 7, 6, 5, 8, 4]),
            cyc(&[1, 4, 7, 8, 12, 9, 6, 2, 5]),
            cyc(&[3, 4, 5, 9, 8, 11, 7, 10, 6]),
        ],
        10 => [
            cyc(&[0, 1, 2, 3, 6, 9, 5, 8, 7, 4]),
            cyc(&[1, 4, 8, 9, 13, 10, 7, 6, 2, 5]),
            cyc(&[3, 4, 5, 6, 10, 9, 12, 8, 11, 7]),
        ],
        _ if m >= 11 && m % 2 == 1 => {
            let k = m as i64;
            [
                cat(vec![
                    pairs(&[
                        (0, 1),
                        (0, 4),
                        (1, 2),
                        (2, 3),
                        (3, 7),
                        (5, 6),
                        (m - 3, m - 2),
                        (m - 5, m - 1),
                        (m - 4, m - 1),
                    ]),
                    run(4, k - 6, 1, 4),
                ]),
                cat(vec![
                    pairs(&[
                        (1, 4),
                        (1, 5),
                        (2, 5),
                        (2, 6),
                        (4, 7),
                        (m, m + 3),
                        (m - 1, m + 3),
                        (m - 2, m - 1),
                        (m - 3, m),
                    ]),
                    run(7, k - 4, 2, 1),
                    run(6, k - 5, 2, 3),
                ]),
                cat(vec![
                    pairs(&[
                        (3, 4),
                        (3, 6),
                        (4, 5),
                        (m - 1, m),
                        (m - 2, m + 1),
                        (m - 1, m + 2),
                        (m - 4, m),
                        (m - 3, m + 1),
                        (m - 2, m + 2),
                    ]),
                    run(6, k - 5, 2, 1),
                    run(5, k - 6, 2, 3),
                ]),
            ]
        }
        _ if m >= 12 => {
            let k = m as i64;
            [
                cat(vec![
                    pairs(&[
                        (0, 1),
                        (0, 4),
                        (1, 2),
                        (2, 3),
                        (3, 6),
                        (4, 7),
                        (5, 6),
                        (5, 9),
                        (m - 5, m - 2),
                        (m - 4, m - 3),
                        (m - 4, m - 1),
                        (m - 2, m - 1),
                    ]),
                    run(7, k - 7, 2, 1),
                    run(8, k - 6, 2, 3),
                ]),
                cat(vec![
                    pairs(&[
                        (1, 4),
                        (1, 5),
                        (2, 5),
                        (2, 6),
                        (4, 8),
                        (m - 6, m - 2),
                        (m - 5, m - 4),
                        (m - 5, m - 1),
                        (m - 3, m - 2),
                        (m - 3, m),
                        (m - 1, m + 3),
                        (m, m + 3),
                    ]),
                    run(6, k - 8, 2, 1),
                    run(7, k - 7, 2, 3),
                ]),
                cat(vec![
                    pairs(&[
                        (3, 4),
                        (3, 7),
                        (4, 5),
                        (5, 8),
                        (6, 9),
                        (m - 6, m - 5),
                        (m - 4, m),
                        (m - 3, m + 1),
                        (m - 2, m + 1),
                        (m - 2, m + 2),
                        (m - 1, m),
                        (m - 1, m + 2),
                    ]),
                    run(6, k - 7, 1, 4),
                ]),
            ]
        }
        _ => {
            return Err(TwoFactorError::Unsupported {
                what: "j134 single cycle",
                m,
                range: "m = 6, m = 7 or m >= 9",
            })
        }
    };
    checked(Flavor::J134, m, parts, &[m])
}

/// `J_m^{1,3,4}` decomposed into copies of `C_8 ∪ C_(m-8)`, for `m >= 14`.
pub fn j134_c8(m: u32) -> Result<JGadget> {
    let parts = match m {
        14 => [
            cat(vec![
                cyc(&[0, 1, 2, 3, 7, 8, 5, 4]),
                cyc(&[6, 9, 13, 12, 11, 10]),
            ]),
            cat(vec![
                cyc(&[8, 11, 14, 17, 13, 10, 9, 12]),
                cyc(&[1, 4, 7, 6, 2, 5]),
            ]),
            cat(vec![
                cyc(&[7, 10, 14, 13, 16, 12, 15, 11]),
                cyc(&[3, 4, 8, 9, 5, 6]),
            ]),
        ],
        15 => [
            cat(vec![
                cyc(&[0, 1, 2, 3, 6, 5, 8, 4]),
                cyc(&[7, 10, 14, 13, 9, 12, 11]),
            ]),
            cat(vec![
                cyc(&[1, 4, 7, 8, 9, 6, 2, 5]),
                cyc(&[10, 11, 14, 18, 15, 12, 13]),
            ]),
            cat(vec![
                cyc(&[8, 11, 15, 14, 17, 13, 16, 12]),
                cyc(&[3, 4, 5, 9, 10, 6, 7]),
            ]),
        ],
        16 => [
            cat(vec![
                cyc(&[0, 1, 5, 6, 2, 3, 7, 4]),
                cyc(&[8, 9, 10, 11, 15, 14, 13, 12]),
            ]),
            cat(vec![
                cyc(&[1, 2, 5, 9, 6, 7, 8, 4]),
                cyc(&[10, 13, 16, 19, 15, 12, 11, 14]),
            ]),
            cat(vec![
                cyc(&[3, 4, 5, 8, 11, 7, 10, 6]),
                cyc(&[9, 12, 16, 15, 18, 14, 17, 13]),
            ]),
        ],
        17 => [
            cat(vec![
                cyc(&[0, 1, 2, 3, 7, 6, 5, 4]),
                cyc(&[8, 9, 13, 16, 12, 15, 14, 10, 11]),
            ]),
            cat(vec![
                cyc(&[1, 4, 8, 12, 9, 6, 2, 5]),
                cyc(&[7, 10, 13, 14, 17, 20, 16, 15, 11]),
            ]),
            cat(vec![
                cyc(&[3, 4, 7, 8, 5, 9, 10, 6]),
                cyc(&[11, 12, 13, 17, 16, 19, 15, 18, 14]),
            ]),
        ],
        _ if m >= 18 && m.is_multiple_of(2) => {
            let k = m as i64;
            [
                cat(vec![
                    cyc(&[0, 1, 5, 6, 2, 3, 7, 4]),
                    pairs(&[
                        (8, 9),
                        (9, 10),
                        (10, 11),
                        (8, 12),
                        (m - 5, m - 1),
                        (m - 4, m - 3),
                        (m - 3, m - 2),
                        (m - 2, m - 1),
                    ]),
                    run(12, k - 6, 2, 1),
                    run(11, k - 7, 2, 3),
                ]),
                cat(vec![
                    cyc(&[1, 2, 5, 9, 6, 7, 8, 4]),
                    pairs(&[
                        (10, 13),
                        (11, 12),
                        (m - 6, m - 2),
                        (m - 5, m - 2),
                        (m - 4, m - 1),
                        (m - 3, m),
                        (m - 1, m + 3),
                        (m, m + 3),
                    ]),
                    run(10, k - 7, 1, 4),
                ]),
                cat(vec![
                    cyc(&[3, 4, 5, 8, 11, 7, 10, 6]),
                    pairs(&[
                        (9, 12),
                        (9, 13),
                        (m - 4, m),
                        (m - 3, m + 1),
                        (m - 2, m + 1),
                        (m - 2, m + 2),
                        (m - 1, m),
                        (m - 1, m + 2),
                    ]),
                    run(13, k - 5, 2, 1),
                    run(12, k - 6, 2, 3),
                ]),
            ]
        }
        _ if m >= 19 => {
            let k = m as i64;
            [
                cat(vec![
                    cyc(&[0, 1, 2, 3, 7, 6, 5, 4]),
                    pairs(&[
                        (8, 9),
                        (8, 11),
                        (9, 13),
                        (10, 11),
                        (10, 14),
                        (12, 15),
                        (12, 16),
                        (m - 4, m - 1),
                        (m - 3, m - 2),
                    ]),
                    run(13, k - 5, 1, 4),
                ]),
                cat(vec![
                    cyc(&[1, 4, 8, 12, 9, 6, 2, 5]),
                    pairs(&[
                        (7, 10),
                        (7, 11),
                        (10, 13),
                        (11, 15),
                        (m - 4, m - 3),
                        (m - 3, m),
                        (m - 2, m - 1),
                        (m - 1, m + 3),
                        (m, m + 3),
                    ]),
                    run(13, k - 6, 2, 1),
                    run(14, k - 5, 2, 3),
                ]),
                cat(vec![
                    cyc(&[3, 4, 7, 8, 5, 9, 10, 6]),
                    pairs(&[
                        (11, 12),
                        (11, 14),
                        (12, 13),
                        (m - 4, m),
                        (m - 3, m + 1),
                        (m - 2, m + 1),
                        (m - 2, m + 2),
                        (m - 1, m),
                        (m - 1, m + 2),
                    ]),
                    run(14, k - 5, 2, 1),
                    run(13, k - 6, 2, 3),
                ]),
            ]
        }
        _ => {
            return Err(TwoFactorError::Unsupported {
                what: "j134 octagon plus cycle",
                m,
                range: "m >= 14",
            })
        }
    };
    checked(Flavor::J134, m, parts, &[8, m.saturating_sub(8)])
}

/// `J_24^{1,3,4}` decomposed into copies of `C_8 ∪ C_8 ∪ C_8`.
pub fn j134_c8_triple() -> Result<JGadget> {
    let parts = [
        cat(vec![
            cyc(&[0, 1, 2, 3, 6, 5, 8, 4]),
            cyc(&[7, 10, 9, 12, 13, 14, 15, 11]),
            cyc(&[16, 17, 18, 19, 23, 22, 21, 20]),
        ]),
        cat(vec![
            cyc(&[1, 4, 7, 8, 9, 6, 2, 5]),
            cyc(&[10, 11, 12, 15, 16, 13, 17, 14]),
            cyc(&[18, 21, 24, 27, 23, 20, 19, 22]),
        ]),
        cat(vec![
            cyc(&[3, 4, 5, 9, 13, 10, 6, 7]),
            cyc(&[8, 11, 14, 18, 15, 19, 16, 12]),
            cyc(&[17, 20, 24, 23, 26, 22, 25, 21]),
        ]),
    ];
    checked(Flavor::J134, 24, parts, &[8, 8, 8])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::cycle_type;

    #[test]
    fn j123_table_row_four() {
        let g = j123_cycle(4).unwrap();
        assert_eq!(g.part_cycles()[1], vec![vec![1, 3, 6, 4]]);
        assert_eq!(g.part_cycles()[2], vec![vec![2, 4, 3, 5]]);
        assert!(matches!(
            j123_cycle(3),
            Err(TwoFactorError::Unsupported { .. })
        ));
    }

    #[test]
    fn j123_triangle_table_and_gaps() {
        let g = j123_c3(8).unwrap();
        assert_eq!(g.part_cycles()[0], vec![vec![0, 1, 2, 5, 3], vec![4, 6, 7]]);
        assert!(matches!(
            j123_c3(9),
            Err(TwoFactorError::Unsupported { .. })
        ));
        assert!(matches!(
            j123_c3(7),
            Err(TwoFactorError::Unsupported { .. })
        ));
        assert_eq!(j123_c3(12).unwrap().cycle_type().lengths(), &[3, 9]);
    }

    #[test]
    fn j134_tables_and_gaps() {
        assert_eq!(
            j134_cycle(6).unwrap().part_cycles()[0],
            vec![vec![0, 1, 5, 2, 3, 4]]
        );
        assert!(matches!(
            j134_cycle(8),
            Err(TwoFactorError::Unsupported { .. })
        ));
        assert!(matches!(
            j134_cycle(5),
            Err(TwoFactorError::Unsupported { .. })
        ));
        let c8 = j134_c8(14).unwrap();
        assert_eq!(
            c8.part_cycles()[0],
            vec![vec![0, 1, 2, 3, 7, 8, 5, 4], vec![6, 9, 13, 12, 11, 10]]
        );
        assert!(matches!(
            j134_c8(13),
            Err(TwoFactorError::Unsupported { .. })
        ));
        assert_eq!(j134_c8_triple().unwrap().cycle_type().lengths(), &[8, 8, 8]);
    }

    #[test]
    fn every_supported_order_up_to_200_validates() {
        for m in 4..=200 {
            j123_cycle(m).unwrap();
        }
        for m in (8..=200).filter(|&m| m != 9) {
            j123_c3(m).unwrap();
        }
        for m in (6..=200).filter(|&m| m != 8) {
            j134_cycle(m).unwrap();
        }
        for m in 14..=200 {
            j134_c8(m).unwrap();
        }
    }

    #[test]
    fn single_cycle_gadgets_wrap_onto_circulants() {
        for n in 7..40 {
            for f in j123_cycle(n).unwrap().wrap().unwrap() {
                assert!(cycle_type(&f).unwrap().is_hamilton());
            }
        }
        for n in (9..40).filter(|&n| n != 8) {
            for f in j134_cycle(n).unwrap().wrap().unwrap() {
                assert!(cycle_type(&f).unwrap().is_hamilton());
            }
        }
    }
}
