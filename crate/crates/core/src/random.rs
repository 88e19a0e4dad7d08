//! Random finite models, valid by construction.
//!
//! A model is grown from a single edge by repeatedly picking a free edge
//! end and closing it with a plain vertex, a branch point (entered through
//! its stem or through one of its members) or an open end. The cells form
//! a tree at every step, so the result always validates. With `copies`
//! set, identical copies of one random subtree hang from a common root
//! branch point and the generators permute the copies.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{
    Attachment, CellFamily, CellKind, End, GeneratorAction, Indexing, LeafSpaceSpec, Mark, Target,
    VertexRef,
};
use crate::point::{Cell, Coord, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub seed: u64,
    /// Inclusive range for the number of branch points grown.
    pub loci: (usize, usize),
    /// Inclusive range for the number of members per branch point.
    pub locus_size: (usize, usize),
    /// Probability that a new branch point is positive.
    pub positive_share: f64,
    /// Plain vertices inserted between edges.
    pub extra_edges: usize,
    /// With two or more, the model is that many copies of one random
    /// subtree below a common branch point, with generators permuting them.
    pub copies: usize,
    pub finite_only: bool,
}

impl Default for RandomParams {
    fn default() -> RandomParams {
        RandomParams {
            seed: 1,
            loci: (1, 3),
            locus_size: (2, 4),
            positive_share: 0.5,
            extra_edges: 3,
            copies: 0,
            finite_only: true,
        }
    }
}

#[derive(Clone, Copy)]
enum Step {
    Vertex,
    Locus,
}

struct Grow {
    prefix: String,
    families: Vec<CellFamily>,
    attachments: Vec<Attachment>,
    edges: usize,
    vertices: usize,
    ports: Vec<(String, End)>,
}

impl Grow {
    fn new(prefix: &str) -> Grow {
        Grow {
            prefix: prefix.to_string(),
            families: Vec::new(),
            attachments: Vec::new(),
            edges: 0,
            vertices: 0,
            ports: Vec::new(),
        }
    }

    fn edge(&mut self) -> String {
        let name = format!("{}e{}", self.prefix, self.edges);
        self.edges += 1;
        self.families
            .push(CellFamily::new(&name, CellKind::Edge, Indexing::Unit));
        name
    }

    fn vertex(&mut self) -> String {
        let name = format!("{}v{}", self.prefix, self.vertices);
        self.vertices += 1;
        self.families
            .push(CellFamily::new(&name, CellKind::Vertex, Indexing::Unit));
        name
    }

    fn attach(&mut self, edge: &str, end: End, target: Target) {
        self.attachments.push(Attachment::cell(edge, end, target));
    }

    /// Gives vertex `v` a new edge on its `side`, whose far end becomes a
    /// free port.
    fn sprout(&mut self, v: &str, side: End) {
        let e = self.edge();
        self.attach(&e, side.opposite(), Target::Vertex(VertexRef::new(v, 0)));
        self.ports.push((e, side));
    }

    fn step(&mut self, rng: &mut ChaCha8Rng, step: Step, params: &RandomParams) {
        let i = rng.gen_range(0..self.ports.len());
        let (e, x) = self.ports.swap_remove(i);
        match step {
            Step::Vertex => {
                let v = self.vertex();
                self.attach(&e, x, Target::Vertex(VertexRef::new(&v, 0)));
                self.sprout(&v, x);
            }
            Step::Locus => {
                let (lo, hi) = params.locus_size;
                let k = rng.gen_range(lo.max(2)..=hi.max(lo).max(2));
                let positive = rng.gen_bool(params.positive_share.clamp(0.0, 1.0));
                let members: Vec<String> = (0..k).map(|_| self.vertex()).collect();
                let limit = Target::Limit(members.iter().map(|m| VertexRef::new(m, 0)).collect());
                // A positive branch point has its stem below, so a free high
                // end enters through the stem and a free low end through a
                // member.
                if positive == (x == End::High) {
                    self.attach(&e, x, limit);
                    for m in &members {
                        self.sprout(m, x);
                    }
                } else {
                    self.attach(&e, x, Target::Vertex(VertexRef::new(&members[0], 0)));
                    let s = self.edge();
                    self.attach(&s, x.opposite(), limit);
                    self.ports.push((s, x));
                    for m in &members[1..] {
                        self.sprout(m, x.opposite());
                    }
                }
            }
        }
    }

    fn run(&mut self, rng: &mut ChaCha8Rng, params: &RandomParams) {
        let (lo, hi) = params.loci;
        let loci = rng.gen_range(lo..=hi.max(lo));
        let mut steps: Vec<Step> = std::iter::repeat_n(Step::Locus, loci)
            .chain(std::iter::repeat_n(Step::Vertex, params.extra_edges))
            .collect();
        steps.shuffle(rng);
        for s in steps {
            self.step(rng, s, params);
        }
        for (e, x) in std::mem::take(&mut self.ports) {
            self.attach(&e, x, Target::Open);
        }
    }
}

fn cycle_generator(
    name: &str,
    perm: &[usize],
    copy_families: &[String],
    roots: &[String],
) -> GeneratorAction {
    let mut g = GeneratorAction::new(name);
    for (i, &j) in perm.iter().enumerate() {
        if i == j {
            continue;
        }
        g = g.map(&roots[i], &roots[j], 0);
        for f in copy_families {
            g = g.map(&format!("c{i}_{f}"), &format!("c{j}_{f}"), 0);
        }
    }
    g
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    if p.iter().enumerate().all(|(i, &j)| i == j) {
        p.rotate_left(1);
    }
    p
}

/// A random finite model. Equal parameters give equal models.
pub fn random_spec(params: &RandomParams) -> Result<LeafSpaceSpec, Error> {
    if !params.finite_only {
        return Err(Error::InvalidModel(
            "only finite random models are supported".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (families, attachments, generators) = if params.copies < 2 {
        let mut g = Grow::new("");
        let e = g.edge();
        g.ports.push((e.clone(), End::Low));
        g.ports.push((e, End::High));
        g.run(&mut rng, params);
        (g.families, g.attachments, Vec::new())
    } else {
        let n = params.copies;
        let mut families = vec![CellFamily::new("s", CellKind::Edge, Indexing::Unit)];
        let roots: Vec<String> = (0..n).map(|i| format!("z{i}")).collect();
        families.extend(
            roots
                .iter()
                .map(|r| CellFamily::new(r, CellKind::Vertex, Indexing::Unit)),
        );
        let mut attachments = vec![
            Attachment::cell("s", End::Low, Target::Open),
            Attachment::cell(
                "s",
                End::High,
                Target::Limit(roots.iter().map(|r| VertexRef::new(r, 0)).collect()),
            ),
        ];
        let template = rng.clone();
        let mut local = Vec::new();
        for (i, root) in roots.iter().enumerate() {
            let mut copy_rng = template.clone();
            let mut g = Grow::new(&format!("c{i}_"));
            g.sprout(root, End::High);
            g.run(&mut copy_rng, params);
            if i == 0 {
                local = g
                    .families
                    .iter()
                    .map(|f| f.name.trim_start_matches("c0_").to_string())
                    .collect();
                rng = copy_rng;
            }
            families.extend(g.families);
            attachments.extend(g.attachments);
        }
        let mut generators = vec![cycle_generator(
            "g",
            &random_perm(&mut rng, n),
            &local,
            &roots,
        )];
        if n > 2 && rng.gen_bool(0.5) {
            generators.push(cycle_generator(
                "h",
                &random_perm(&mut rng, n),
                &local,
                &roots,
            ));
        }
        (families, attachments, generators)
    };
    let marks = vec![Mark {
        name: "x".into(),
        point: Point::Interior(Cell::unit(&families[0].name), Coord::half()),
    }];
    Ok(LeafSpaceSpec::new(
        families,
        attachments,
        generators,
        marks,
    )?)
}
