//! Bundled example sessions, addressable by id from the command line.

pub const PAPER_SESSIONS: &[(&str, &str)] = &[
    ("ex1_1", include_str!("../../paper/ex1_1.cod")),
    ("ex3_1_k1", include_str!("../../paper/ex3_1_k1.cod")),
    ("ex3_1_k2", include_str!("../../paper/ex3_1_k2.cod")),
    ("ex3_1_k3", include_str!("../../paper/ex3_1_k3.cod")),
    ("ex3_2_k1", include_str!("../../paper/ex3_2_k1.cod")),
    ("ex3_2_k2", include_str!("../../paper/ex3_2_k2.cod")),
    ("monomial_2dim", include_str!("../../paper/monomial_2dim.cod")),
    ("cone_a1_ruling", include_str!("../../paper/cone_a1_ruling.cod")),
    ("cone_a1_vertex", include_str!("../../paper/cone_a1_vertex.cod")),
    ("ex5_1", include_str!("../../paper/ex5_1.cod")),
    ("ex6_1", include_str!("../../paper/ex6_1.cod")),
];

pub fn paper_session(id: &str) -> Option<&'static str> {
    PAPER_SESSIONS
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, v)| *v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::GbConfig;
    use crate::session::{parse_session, resolve};

    #[test]
    fn every_bundled_session_resolves() {
        for (id, text) in PAPER_SESSIONS {
            let s = parse_session(text).unwrap_or_else(|e| panic!("{id}: {e}"));
            resolve(&s, &GbConfig::default()).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn lookup() {
        assert!(paper_session("ex5_1").is_some());
        assert!(paper_session("nope").is_none());
    }
}
