//! Line-oriented text formats for arenas, DFAs and strategies.
//!
//! All three share the same lexical rules: `#` starts a comment, blank lines
//! are ignored, fields are separated by whitespace.
//!
//! Arena:
//!
//! ```text
//! vertex <id> <0|1> <color>
//! edge <src> <dst> <weight>
//! ```
//!
//! Declaration order defines vertex indices. Edges may only mention
//! vertices declared earlier in the file.
//!
//! DFA:
//!
//! ```text
//! alphabet <color>...
//! states <state>...          # optional
//! initial <state>
//! accepting [<state>...]
//! trans <src> <color> <dst>
//! ```
//!
//! States are numbered by first mention; a `states` line fixes that order up
//! front, which the serializer uses so that a round trip preserves indices.
//! `initial` is mandatory and `accepting` may list no states.
//!
//! Strategy, over any host graph whose vertex labels are whitespace-free:
//!
//! ```text
//! player <0|1>
//! memory <size>
//! init <vertex> <m>
//! upd <m> <vertex> <m'>
//! move <vertex> <m> <successor>
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::arena::{validate_arena_at, Arena, Color, Edge, Vertex};
use crate::dfa::{validate_dfa, Dfa};
use crate::error::{Error, Result};
use crate::graph::{GameGraph, Player};
use crate::strategy::{FiniteStateStrategy, MemoryStructure};

/// Non-empty lines as `(line number, fields)`, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn expect_fields(line: usize, fields: &[&str], n: usize, usage: &str) -> Result<()> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(parse_err(line, format!("expected `{usage}`")))
    }
}

fn parse_player(line: usize, s: &str) -> Result<Player> {
    match s {
        "0" => Ok(Player::Zero),
        "1" => Ok(Player::One),
        _ => Err(parse_err(line, format!("owner must be 0 or 1, got {s:?}"))),
    }
}

fn parse_number<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(line, format!("{what} {s:?} is not a number")))
}

pub fn parse_arena(text: &str) -> Result<Arena> {
    let mut vertices = Vec::new();
    let mut vertex_lines = Vec::new();
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (line, f) in lines(text) {
        match f[0] {
            "vertex" => {
                expect_fields(line, &f, 4, "vertex <id> <0|1> <color>")?;
                let owner = parse_player(line, f[2])?;
                if let Some(&prev) = index.get(f[1]) {
                    return Err(parse_err(
                        line,
                        format!("duplicate id {} (first declared on line {})", f[1], vertex_lines[prev]),
                    ));
                }
                index.insert(f[1].to_string(), vertices.len());
                vertices.push(Vertex::new(f[1], owner, f[3]));
                vertex_lines.push(line);
            }
            "edge" => {
                expect_fields(line, &f, 4, "edge <src> <dst> <weight>")?;
                let resolve = |id: &str| {
                    index
                        .get(id)
                        .copied()
                        .ok_or_else(|| parse_err(line, format!("undeclared vertex {id}")))
                };
                let (src, dst) = (resolve(f[1])?, resolve(f[2])?);
                let weight = parse_number(line, f[3], "weight")?;
                edges.push(Edge::new(src, dst, weight));
                edge_lines.push(line);
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let report = validate_arena_at(
        &vertices,
        &edges,
        |v| format!("line {}: vertex {}", vertex_lines[v], vertices[v].id),
        |i| {
            let e = edges[i];
            format!("line {}: edge {} {}", edge_lines[i], vertices[e.src].id, vertices[e.dst].id)
        },
    );
    report.into_result()?;
    Arena::new(vertices, edges)
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut alphabet: Option<Vec<Color>> = None;
    let mut states: Vec<String> = Vec::new();
    let mut state_index: HashMap<String, usize> = HashMap::new();
    let mut initial = None;
    let mut accepting = None;
    let mut trans: Vec<(usize, usize, String, usize)> = Vec::new();
    let mut mention = |name: &str| -> usize {
        *state_index.entry(name.to_string()).or_insert_with(|| {
            states.push(name.to_string());
            states.len() - 1
        })
    };
    for (line, f) in lines(text) {
        match f[0] {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(parse_err(line, "second alphabet line"));
                }
                let colors: Vec<Color> = f[1..].iter().map(|&c| Color::new(c)).collect();
                let mut sorted = colors.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != colors.len() {
                    return Err(parse_err(line, "alphabet lists a color twice"));
                }
                alphabet = Some(colors);
            }
            "states" => {
                for s in &f[1..] {
                    mention(s);
                }
            }
            "initial" => {
                expect_fields(line, &f, 2, "initial <state>")?;
                if initial.is_some() {
                    return Err(parse_err(line, "second initial line"));
                }
                initial = Some(mention(f[1]));
            }
            "accepting" => {
                if accepting.is_some() {
                    return Err(parse_err(line, "second accepting line"));
                }
                accepting = Some(f[1..].iter().map(|s| mention(s)).collect::<Vec<_>>());
            }
            "trans" => {
                expect_fields(line, &f, 4, "trans <src> <color> <dst>")?;
                let (src, dst) = (mention(f[1]), mention(f[3]));
                trans.push((line, src, f[2].to_string(), dst));
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let last_line = text.lines().count();
    let alphabet = alphabet.ok_or_else(|| parse_err(last_line, "missing alphabet line"))?;
    let initial = initial.ok_or_else(|| parse_err(last_line, "missing initial line"))?;
    let mut dfa = Dfa::new(states, alphabet, initial, accepting.unwrap_or_default());
    for (line, src, color, dst) in trans {
        let c = dfa
            .color_index(&Color(color.clone()))
            .ok_or_else(|| parse_err(line, format!("color {color} is not in the alphabet")))?;
        if let Some(prev) = dfa.set_transition(src, c, dst) {
            if prev != dst {
                return Err(parse_err(
                    line,
                    format!(
                        "nondeterministic: ({}, {color}) goes to both {} and {}",
                        dfa.state_name(src),
                        dfa.state_name(prev),
                        dfa.state_name(dst)
                    ),
                ));
            }
        }
    }
    validate_dfa(&dfa, []).into_result()?;
    Ok(dfa)
}

pub fn write_arena(a: &Arena) -> String {
    let mut out = String::new();
    for v in a.vertices() {
        writeln!(out, "vertex {} {} {}", v.id, v.owner.index(), v.color).unwrap();
    }
    for v in 0..a.num_vertices() {
        for &(t, w) in a.successors(v) {
            writeln!(out, "edge {} {} {w}", a.vertex(v).id, a.vertex(t).id).unwrap();
        }
    }
    out
}

pub fn write_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    let names = |it: &mut dyn Iterator<Item = &str>| it.collect::<Vec<_>>().join(" ");
    writeln!(out, "alphabet {}", names(&mut d.alphabet().iter().map(Color::as_str))).unwrap();
    writeln!(out, "states {}", names(&mut d.states().iter().map(String::as_str))).unwrap();
    writeln!(out, "initial {}", d.state_name(d.initial())).unwrap();
    let accepting = names(&mut d.accepting().iter().map(|&q| d.state_name(q)));
    writeln!(out, "{}", format!("accepting {accepting}").trim_end()).unwrap();
    for q in 0..d.num_states() {
        for (ci, c) in d.alphabet().iter().enumerate() {
            if let Some(t) = d.transition(q, ci) {
                writeln!(out, "trans {} {c} {}", d.state_name(q), d.state_name(t)).unwrap();
            }
        }
    }
    out
}

pub fn write_strategy<G: GameGraph + ?Sized>(g: &G, s: &FiniteStateStrategy) -> String {
    let mem = s.memory();
    let mut out = String::new();
    writeln!(out, "player {}", s.player().index()).unwrap();
    writeln!(out, "memory {}", mem.size()).unwrap();
    for v in 0..g.num_vertices() {
        writeln!(out, "init {} {}", g.vertex_label(v), mem.init(v)).unwrap();
    }
    for m in 0..mem.size() {
        for v in 0..g.num_vertices() {
            writeln!(out, "upd {m} {} {}", g.vertex_label(v), mem.update(m, v)).unwrap();
        }
    }
    for (v, m, t) in s.moves() {
        writeln!(out, "move {} {m} {}", g.vertex_label(v), g.vertex_label(t)).unwrap();
    }
    out
}

/// Parses a strategy whose vertices are named by `g`'s labels. Missing
/// `init` and `upd` entries default to memory state 0.
pub fn parse_strategy<G: GameGraph + ?Sized>(g: &G, text: &str) -> Result<FiniteStateStrategy> {
    let n = g.num_vertices();
    let labels: HashMap<String, usize> = (0..n).map(|v| (g.vertex_label(v), v)).collect();
    let vertex = |line: usize, s: &str| {
        labels
            .get(s)
            .copied()
            .ok_or_else(|| parse_err(line, format!("unknown vertex {s}")))
    };
    let mut player = None;
    let mut size: Option<usize> = None;
    let mut init = vec![0; n];
    let mut upd = Vec::new();
    let mut nxt = Vec::new();
    for (line, f) in lines(text) {
        let memory_state = |s: &str| -> Result<usize> {
            let k = size.ok_or_else(|| parse_err(line, "memory line must come first"))?;
            let m: usize = parse_number(line, s, "memory state")?;
            if m >= k {
                return Err(parse_err(line, format!("memory state {m} out of range")));
            }
            Ok(m)
        };
        match f[0] {
            "player" => {
                expect_fields(line, &f, 2, "player <0|1>")?;
                player = Some(parse_player(line, f[1])?);
            }
            "memory" => {
                expect_fields(line, &f, 2, "memory <size>")?;
                let k: usize = parse_number(line, f[1], "memory size")?;
                if k == 0 || size.is_some() {
                    return Err(parse_err(line, "memory size must be given once and be positive"));
                }
                size = Some(k);
                upd = vec![0; k * n];
                nxt = vec![None; k * n];
            }
            "init" => {
                expect_fields(line, &f, 3, "init <vertex> <m>")?;
                let v = vertex(line, f[1])?;
                init[v] = memory_state(f[2])?;
            }
            "upd" => {
                expect_fields(line, &f, 4, "upd <m> <vertex> <m'>")?;
                let m = memory_state(f[1])?;
                let v = vertex(line, f[2])?;
                upd[m * n + v] = memory_state(f[3])?;
            }
            "move" => {
                expect_fields(line, &f, 4, "move <vertex> <m> <successor>")?;
                let v = vertex(line, f[1])?;
                let m = memory_state(f[2])?;
                let t = vertex(line, f[3])?;
                if g.edge_weight(v, t).is_none() {
                    return Err(parse_err(line, format!("{} is not a successor of {}", f[3], f[1])));
                }
                nxt[v * size.unwrap() + m] = Some(t);
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let last_line = text.lines().count();
    let player = player.ok_or_else(|| parse_err(last_line, "missing player line"))?;
    let size = size.ok_or_else(|| parse_err(last_line, "missing memory line"))?;
    let s = FiniteStateStrategy::new(player, MemoryStructure::new(size, init, upd)?, nxt)?;
    s.validate(g).map_err(|e| parse_err(last_line, e.to_string()))?;
    Ok(s)
}
