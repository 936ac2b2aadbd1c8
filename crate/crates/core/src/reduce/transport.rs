//! Carrying codes across the reductions in both directions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ClientOrigin, EdgeRole, IndexReduction, NetworkReduction, ReduceError};
use crate::femat::{FeMatrix, MatrixError};
use crate::index::{
    check_decoder, selector, source_vector, table_domain, verify_linear, verify_table, IndexCode, LinearIndexCode,
    TableCode,
};
use crate::matroid::{elements, verify_representation, Matroid, RepReport, Representation};
use crate::netcode::{self, LinearNetworkCode, NetworkCode, NetworkInstance};

fn check_reduction_of_network(network: &NetworkInstance, red: &IndexReduction) -> Result<(), ReduceError> {
    if red.instance.k() != network.k() + network.m() {
        return Err(ReduceError::Mismatch(format!(
            "index instance has {} messages, the network needs {}",
            red.instance.k(),
            network.k() + network.m()
        )));
    }
    Ok(())
}

/// Network code to perfect index code: block `i` of the index code is
/// `y_i + f_{e_i}(x)`. Table codes use symbolwise addition in the field.
pub fn transport_net_to_index(
    network: &NetworkInstance,
    code: &NetworkCode,
    red: &IndexReduction,
) -> Result<IndexCode, ReduceError> {
    check_reduction_of_network(network, red)?;
    let report = netcode::verify(network, code)?;
    if !report.valid {
        return Err(ReduceError::InvalidInput(format!(
            "network code fails {:?} at edge {}",
            report.failures[0].condition,
            report.failures[0].edge + 1
        )));
    }
    let (k, m) = (network.k(), network.m());
    let out = match code {
        NetworkCode::Linear(c) => {
            let n = c.n;
            let field = &c.field;
            let mut enc = FeMatrix::zeros(field, n * (k + m), n * m);
            for e in 0..m {
                enc.set_block(0, e * n, &c.global[e]);
                enc.set_block(n * (k + e), e * n, &FeMatrix::identity(field, n));
            }
            let lin = LinearIndexCode::new(n, enc);
            let rep = verify_linear(&red.instance, &lin)?;
            if let Some(client) = rep.first_failure() {
                return Err(ReduceError::ClientFails {
                    client,
                    rule: red.origins[client].rule(),
                    detail: "transported code does not decode".into(),
                });
            }
            IndexCode::Linear(lin)
        }
        NetworkCode::Table(t) => {
            let n = t.n;
            let field = &t.field;
            let total = n * (k + m);
            let size = table_domain(field, total)?;
            let y_size = (field.q() as usize).pow((n * m) as u32);
            let mut table = Vec::with_capacity(size * n * m);
            let mut z = vec![0u16; total];
            for idx in 0..size {
                source_vector(field, total, idx, &mut z);
                let x_index = idx / y_size;
                for e in 0..m {
                    let f = t.value(e, x_index);
                    let y = &z[n * (k + e)..n * (k + e + 1)];
                    table.extend(y.iter().zip(f).map(|(&a, &b)| field.add_raw(a, b)));
                }
            }
            let tc = TableCode {
                field: field.clone(),
                n,
                k: k + m,
                c: n * m,
                table,
            };
            let rep = verify_table(&red.instance, &tc)?;
            if let Some(ce) = rep.counterexample {
                return Err(ReduceError::ClientFails {
                    client: ce.client,
                    rule: red.origins[ce.client].rule(),
                    detail: "transported table code does not decode".into(),
                });
            }
            IndexCode::Table(tc)
        }
    };
    Ok(out)
}

/// Splits a perfect code's rows into the `x` part and the normalizing
/// square `y` part, and returns `L_X · L_Y⁻¹`.
fn normalize(
    enc: &FeMatrix,
    x_rows: std::ops::Range<usize>,
    y_rows: std::ops::Range<usize>,
) -> Result<FeMatrix, MatrixError> {
    let lx = enc.select_rows(&x_rows.collect::<Vec<_>>());
    let ly = enc.select_rows(&y_rows.collect::<Vec<_>>());
    lx.mul(&ly.invert()?)
}

fn require_perfect(code: &LinearIndexCode, n: usize, blocks: usize, rows: usize) -> Result<(), ReduceError> {
    if code.n != n || code.enc.rows() != rows {
        return Err(ReduceError::Mismatch(format!(
            "code is {}x{} with block length {}, expected {rows} rows and block length {n}",
            code.enc.rows(),
            code.enc.cols(),
            code.n
        )));
    }
    if code.c != n * blocks {
        return Err(ReduceError::NotPerfect {
            c: code.c,
            expected: n * blocks,
        });
    }
    Ok(())
}

/// Perfect linear index code to network code. The code is normalized by the
/// inverse of its `y` block, `h_i = y_i + x·C_i`; input and output edges
/// must then see only their own message through an invertible block, and
/// the remaining blocks become the global encoders of internal edges.
pub fn transport_index_to_net(
    network: &NetworkInstance,
    red: &IndexReduction,
    code: &LinearIndexCode,
) -> Result<LinearNetworkCode, ReduceError> {
    check_reduction_of_network(network, red)?;
    let (k, m, n) = (network.k(), network.m(), red.instance.n());
    require_perfect(code, n, m, n * (k + m))?;
    let field = &code.field;
    let c_mat = match normalize(&code.enc, 0..n * k, n * k..n * (k + m)) {
        Ok(c) => c,
        Err(MatrixError::Singular { rank, size }) => {
            let client = red
                .origins
                .iter()
                .position(|o| matches!(o, ClientOrigin::NetFromSources { .. }))
                .unwrap_or(0);
            return Err(ReduceError::SingularNormalizer {
                rank,
                size,
                client,
                rule: "R5",
            });
        }
        Err(e) => return Err(e.into()),
    };
    let block = |j: usize, e: usize| c_mat.block(j * n, e * n, n, n);
    // Edge e must carry only message `own`, through an invertible block.
    let isolated = |e: usize, own: usize| -> bool {
        (0..k).all(|j| {
            let b = block(j, e);
            if j == own {
                b.rank() == n
            } else {
                b.is_zero()
            }
        })
    };
    let client_of = |demand: usize, e: usize, rule: &'static str| -> usize {
        red.find_client(demand, &[k + e]).unwrap_or_else(|| {
            red.origins
                .iter()
                .position(|o| o.rule() == rule)
                .unwrap_or(0)
        })
    };
    let mut global = Vec::with_capacity(m);
    for e in 0..m {
        if e < k {
            if !isolated(e, e) {
                return Err(ReduceError::ClientFails {
                    client: client_of(e, e, "R1"),
                    rule: "R1",
                    detail: format!("normalized block of input edge {} mixes messages or is singular", e + 1),
                });
            }
            global.push(selector(field, n, k, &[e]));
        } else if let Some(d) = network.demand_of(e) {
            if !isolated(e, d) {
                return Err(ReduceError::ClientFails {
                    client: client_of(d, e, "R4"),
                    rule: "R4",
                    detail: format!("normalized block of output edge {} does not isolate its demand", e + 1),
                });
            }
            global.push(selector(field, n, k, &[d]));
        } else {
            global.push(c_mat.block(0, e * n, n * k, n));
        }
    }
    let net_code = LinearNetworkCode {
        field: field.clone(),
        n,
        k,
        global,
    };
    let rep = netcode::verify_linear(network, &net_code)?;
    if let Some(f) = rep.failures.first() {
        let side: Vec<usize> = network.parents(f.edge).iter().map(|&p| k + p).collect();
        let client = red.find_client(k + f.edge, &side).unwrap_or(0);
        return Err(ReduceError::ClientFails {
            client,
            rule: "R3",
            detail: format!("edge {} is not a function of its parents", f.edge + 1),
        });
    }
    Ok(net_code)
}

/// Representation to perfect index code, `f_i = y_i + x·M_i`, with one
/// explicit decoder per client built as in the proof: basis clients invert
/// `M_B`, circuit clients solve `M_{i} = M_{C'} T`, and the remaining
/// clients subtract `x·M_i`.
pub fn transport_rep_to_index(
    matroid: &Matroid,
    rep: &Representation,
    red: &IndexReduction,
) -> Result<(LinearIndexCode, Vec<FeMatrix>), ReduceError> {
    if let RepReport::Fail { subset, expected, actual } = verify_representation(matroid, rep)? {
        return Err(ReduceError::InvalidInput(format!(
            "representation fails at {:?}: rank {actual}, expected {expected}",
            elements(subset).iter().map(|e| e + 1).collect::<Vec<_>>()
        )));
    }
    let (m, k, n) = (matroid.m(), matroid.full_rank(), rep.n);
    if red.instance.k() != m + k || red.instance.n() != n || red.instance.field() != &rep.field {
        return Err(ReduceError::Mismatch("index instance is not the matroid's instance at this block length".into()));
    }
    let field = &rep.field;
    let c = m * n;
    let mut enc = FeMatrix::zeros(field, n * (m + k), c);
    for i in 0..m {
        enc.set_block(i * n, i * n, &FeMatrix::identity(field, n));
        enc.set_block(m * n, i * n, &rep.mats[i]);
    }
    let code = LinearIndexCode::new(n, enc);
    let id = FeMatrix::identity(field, n);

    let mut decoders = Vec::with_capacity(red.instance.clients().len());
    for (r, (cl, origin)) in red.instance.clients().iter().zip(&red.origins).enumerate() {
        let mut d = FeMatrix::zeros(field, c + n * cl.side.len(), n);
        match origin {
            ClientOrigin::MatBasis { basis, message } => {
                let mb = FeMatrix::concat_indexed(field, &rep.mats, basis)?;
                let u = mb.invert()?;
                for (p, &b) in basis.iter().enumerate() {
                    let blk = u.block(p * n, message * n, n, n);
                    d.set_block(b * n, 0, &blk);
                    d.set_block(c + p * n, 0, &blk.neg());
                }
            }
            ClientOrigin::MatCircuit { circuit, element } => {
                let rest: Vec<usize> = circuit.iter().copied().filter(|z| z != element).collect();
                let mc = FeMatrix::concat_indexed(field, &rep.mats, &rest)?;
                let t = mc.solve_right(&rep.mats[*element])?.ok_or_else(|| {
                    ReduceError::InvalidInput(format!("circuit element {} is not spanned", element + 1))
                })?;
                d.set_block(element * n, 0, &id);
                for (p, &z) in rest.iter().enumerate() {
                    let blk = t.block(p * n, 0, n, n);
                    d.set_block(z * n, 0, &blk.neg());
                    d.set_block(c + p * n, 0, &blk);
                }
            }
            ClientOrigin::MatFromSources { element } => {
                d.set_block(element * n, 0, &id);
                d.set_block(c, 0, &rep.mats[*element].neg());
            }
            other => {
                return Err(ReduceError::Mismatch(format!(
                    "client {} comes from a network rule {}",
                    r + 1,
                    other.rule()
                )))
            }
        }
        decoders.push(d);
    }

    let report = verify_linear(&red.instance, &code)?;
    if let Some(client) = report.first_failure() {
        return Err(ReduceError::ClientFails {
            client,
            rule: red.origins[client].rule(),
            detail: "transported code does not decode".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (r, d) in decoders.iter().enumerate() {
        if !check_decoder(&red.instance, &code, r, d, 16, &mut rng)? {
            return Err(ReduceError::ClientFails {
                client: r,
                rule: red.origins[r].rule(),
                detail: "constructed decoder gives wrong output".into(),
            });
        }
    }
    Ok((code, decoders))
}

/// Perfect linear index code to representation: normalize by the inverse of
/// the `y` block and read `A_i` off the `x` rows.
pub fn transport_index_to_rep(
    matroid: &Matroid,
    red: &IndexReduction,
    code: &LinearIndexCode,
) -> Result<Representation, ReduceError> {
    let (m, k, n) = (matroid.m(), matroid.full_rank(), red.instance.n());
    if red.instance.k() != m + k {
        return Err(ReduceError::Mismatch("index instance is not the matroid's instance".into()));
    }
    require_perfect(code, n, m, n * (m + k))?;
    let c_mat = match normalize(&code.enc, m * n..(m + k) * n, 0..m * n) {
        Ok(c) => c,
        Err(MatrixError::Singular { rank, size }) => {
            let client = red
                .origins
                .iter()
                .position(|o| matches!(o, ClientOrigin::MatFromSources { .. }))
                .unwrap_or(0);
            return Err(ReduceError::SingularNormalizer {
                rank,
                size,
                client,
                rule: "R3",
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mats = (0..m).map(|i| c_mat.block(0, i * n, k * n, n)).collect();
    let rep = Representation::new(&code.field, n, mats)?;
    if let RepReport::Fail { subset, expected, actual } = verify_representation(matroid, &rep)? {
        return Err(ReduceError::InvalidInput(format!(
            "extracted matrices fail at {:?}: rank {actual}, expected {expected}",
            elements(subset).iter().map(|e| e + 1).collect::<Vec<_>>()
        )));
    }
    Ok(rep)
}

/// Index code with `c = bottlenecks · n` symbols to a network code on a
/// broadcast-style network: bottleneck `j` and its copies carry block `j`,
/// feeds and side-information edges carry their message, outputs carry the
/// client's demand.
pub fn icn_code_from_index(red: &NetworkReduction, code: &LinearIndexCode) -> Result<LinearNetworkCode, ReduceError> {
    let inst = &red.instance;
    let (n, k) = (inst.n(), inst.k());
    if code.n != n || code.enc.rows() != n * k {
        return Err(ReduceError::Mismatch("code does not fit the instance".into()));
    }
    if code.c != red.bottlenecks * n {
        return Err(ReduceError::Mismatch(format!(
            "code has {} symbols, the network carries {}",
            code.c,
            red.bottlenecks * n
        )));
    }
    let field = &code.field;
    let global = red
        .roles
        .iter()
        .map(|role| match *role {
            EdgeRole::Input { message }
            | EdgeRole::SenderFeed { message, .. }
            | EdgeRole::SideInfo { message, .. }
            | EdgeRole::DirectFeed { message, .. } => selector(field, n, k, &[message]),
            EdgeRole::Bottleneck { index } | EdgeRole::Broadcast { bottleneck: index, .. } => {
                code.enc.block(0, index * n, n * k, n)
            }
            EdgeRole::Output { client } => selector(field, n, k, &[inst.clients()[client].demand]),
        })
        .collect();
    let net_code = LinearNetworkCode {
        field: field.clone(),
        n,
        k,
        global,
    };
    let rep = netcode::verify_linear(&red.network, &net_code)?;
    if let Some(f) = rep.failures.first() {
        return Err(ReduceError::InvalidInput(format!(
            "index code does not serve the client at edge {} ({:?})",
            f.edge + 1,
            red.roles[f.edge]
        )));
    }
    Ok(net_code)
}

/// Network code on a broadcast-style network to an index code: the
/// concatenated bottleneck encoders.
pub fn icn_index_from_code(red: &NetworkReduction, code: &LinearNetworkCode) -> Result<LinearIndexCode, ReduceError> {
    let blocks: Vec<&FeMatrix> = red.bottleneck_edges().iter().map(|&e| &code.global[e]).collect();
    let enc = FeMatrix::hstack(&blocks)?;
    let lin = LinearIndexCode::new(code.n, enc);
    let rep = verify_linear(&red.instance, &lin)?;
    if let Some(client) = rep.first_failure() {
        return Err(ReduceError::ClientFails {
            client,
            rule: "client",
            detail: "bottleneck encoders do not serve this client".into(),
        });
    }
    Ok(lin)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::galois::FieldSpec;
    use crate::index::{is_perfect, Client, IndexInstance};
    use crate::netcode::{random_code, Edge, TableNetworkCode};

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn path() -> NetworkInstance {
        NetworkInstance::new(
            2,
            vec![Edge::input(0), Edge::internal(0, 1), Edge::output(1)],
            vec![0],
            vec![2],
            vec![0],
        )
        .unwrap()
    }

    #[test]
    fn path_round_trip() {
        let net = path();
        let f = gf(3);
        let code = random_code(&net, &f, 1, 1).unwrap();
        let red = net_to_index(&net, &f, 1).unwrap();
        assert_eq!(red.instance.mu(), 3);
        let ic = transport_net_to_index(&net, &NetworkCode::Linear(code.clone()), &red).unwrap();
        assert!(is_perfect(&red.instance, &ic).unwrap());
        let IndexCode::Linear(lin) = ic else { panic!() };
        let back = transport_index_to_net(&net, &red, &lin).unwrap();
        assert!(netcode::verify_linear(&net, &back).unwrap().valid);

        let table = TableNetworkCode::from_linear(&code).unwrap();
        let tc = transport_net_to_index(&net, &NetworkCode::Table(table), &red).unwrap();
        assert!(is_perfect(&red.instance, &tc).unwrap());
    }

    #[test]
    fn clear_y_code_fails_at_input_client() {
        let net = path();
        let f = gf(2);
        let red = net_to_index(&net, &f, 1).unwrap();
        // Send y's in the clear: B = I, A = 0.
        let mut enc = FeMatrix::zeros(&f, 4, 3);
        enc.set_block(1, 0, &FeMatrix::identity(&f, 3));
        let err = transport_index_to_net(&net, &red, &LinearIndexCode::new(1, enc)).unwrap_err();
        match err {
            ReduceError::ClientFails { client, rule, .. } => {
                assert_eq!(rule, "R1");
                assert_eq!(red.instance.clients()[client], Client::new(0, [1]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn imperfect_and_singular_codes_are_rejected() {
        let net = path();
        let f = gf(2);
        let red = net_to_index(&net, &f, 1).unwrap();
        let id = LinearIndexCode::identity(&red.instance);
        assert!(matches!(
            transport_index_to_net(&net, &red, &id),
            Err(ReduceError::NotPerfect { c: 4, expected: 3 })
        ));
        let zero = LinearIndexCode::new(1, FeMatrix::zeros(&f, 4, 3));
        assert!(matches!(
            transport_index_to_net(&net, &red, &zero),
            Err(ReduceError::SingularNormalizer { rule: "R5", .. })
        ));
    }

    #[test]
    fn u23_scalar_round_trip() {
        let f = gf(2);
        let u = Matroid::uniform(2, 3).unwrap();
        let mats = [[1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|c| FeMatrix::column(&f, c).unwrap())
            .collect();
        let rep = Representation::new(&f, 1, mats).unwrap();
        let red = matroid_to_index(&u, &f, 1, Default::default()).unwrap();
        let (code, decoders) = transport_rep_to_index(&u, &rep, &red).unwrap();
        assert_eq!(code.c, 3);
        assert_eq!(decoders.len(), 12);
        assert!(is_perfect(&red.instance, &IndexCode::Linear(code.clone())).unwrap());
        let back = transport_index_to_rep(&u, &red, &code).unwrap();
        assert!(verify_representation(&u, &back).unwrap().passed());
        assert_eq!(back, rep);
    }

    #[test]
    fn icn_round_trip_on_tiny_instance() {
        let f = gf(2);
        let inst = IndexInstance::new(&f, 1, 2, vec![Client::new(0, [1]), Client::new(1, [0])]).unwrap();
        let red = index_to_network(&inst, 1).unwrap();
        let enc = FeMatrix::column(&f, &[1, 1]).unwrap();
        let net_code = icn_code_from_index(&red, &LinearIndexCode::new(1, enc.clone())).unwrap();
        let back = icn_index_from_code(&red, &net_code).unwrap();
        assert_eq!(back.enc, enc);
        let bad = FeMatrix::column(&f, &[1, 0]).unwrap();
        assert!(icn_code_from_index(&red, &LinearIndexCode::new(1, bad)).is_err());
    }

    #[test]
    fn u23_network_from_representation() {
        let f = gf(2);
        let u = Matroid::uniform(2, 3).unwrap();
        let mats = [[1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|c| FeMatrix::column(&f, c).unwrap())
            .collect();
        let rep = Representation::new(&f, 1, mats).unwrap();
        let (net, red) = matroid_to_network(&u, &f, 1, Default::default()).unwrap();
        let (code, _) = transport_rep_to_index(&u, &rep, &red).unwrap();
        let nc = icn_code_from_index(&net, &code).unwrap();
        assert!(netcode::verify_linear(&net.network, &nc).unwrap().valid);
    }
}
