mod support;

use std::f64::consts::TAU;

use hilbert_core::projective::map_quad_to_quad;
use hilbert_core::scene::format_f64;
use hilbert_core::star::StarPolygon;
use hilbert_core::voronoi::two_site_cells;
use hilbert_core::{
    crossing_events, detect_degenerate_pair, sector_decomposition, trace_bisector, DiagramDump, Domain, Point,
    SectorLabels, Segment, VoronoiDiagram,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{random_in_polygon, random_interior, random_polygon, random_sites};

fn setup(seed: u64, m: usize) -> (ChaCha8Rng, Domain) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = Domain::new(random_polygon(&mut rng, m));
    (rng, domain)
}

fn star(radii: &[f64], phase: f64) -> StarPolygon<u32> {
    let k = radii.len();
    let verts = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| Point::from_angle(phase + TAU * i as f64 / k as f64) * r)
        .collect();
    StarPolygon::new(Point::new(0.0, 0.0), verts, (0..k as u32).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_is_a_metric(seed in any::<u64>(), m in 3usize..10) {
        let (mut rng, d) = setup(seed, m);
        let [a, b, c] = [0; 3].map(|_| random_interior(&mut rng, &d, 0.01));
        let ab = d.hilbert_distance(a, b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - d.hilbert_distance(b, a).unwrap()).abs() <= 1e-9);
        prop_assert_eq!(d.hilbert_distance(a, a).unwrap(), 0.0);
        let slack = d.hilbert_distance(a, c).unwrap() + d.hilbert_distance(c, b).unwrap() - ab;
        prop_assert!(slack >= -1e-9, "triangle slack {}", slack);
    }

    #[test]
    fn cross_ratio_matches_edge_form(seed in any::<u64>(), m in 3usize..10) {
        let (mut rng, d) = setup(seed, m);
        let (a, b) = (random_interior(&mut rng, &d, 0.01), random_interior(&mut rng, &d, 0.01));
        let h = d.hilbert_distance(a, b).unwrap();
        let x = d.hilbert_distance_by_cross_ratio(a, b).unwrap();
        prop_assert!((h - x).abs() <= 1e-9 * (1.0 + h), "{} vs {}", h, x);
    }

    #[test]
    fn projective_maps_preserve_distance(seed in any::<u64>(), jitter in prop::array::uniform8(-0.2f64..0.2)) {
        let (mut rng, d) = setup(seed, 4);
        let v = d.polygon().vertices();
        let dst = [
            Point::new(0.0 + jitter[0], 0.0 + jitter[1]),
            Point::new(1.0 + jitter[2], 0.0 + jitter[3]),
            Point::new(1.0 + jitter[4], 1.0 + jitter[5]),
            Point::new(0.0 + jitter[6], 1.0 + jitter[7]),
        ];
        let map = map_quad_to_quad([v[0], v[1], v[2], v[3]], dst).unwrap();
        let image = Domain::from_vertices(dst.to_vec()).unwrap();
        let (a, b) = (random_interior(&mut rng, &d, 0.02), random_interior(&mut rng, &d, 0.02));
        let h = d.hilbert_distance(a, b).unwrap();
        let h2 = image.hilbert_distance(map.apply(a).unwrap(), map.apply(b).unwrap()).unwrap();
        prop_assert!((h - h2).abs() <= 1e-8 * (1.0 + h), "{} vs {}", h, h2);
    }

    #[test]
    fn ball_vertices_lie_on_the_sphere(seed in any::<u64>(), m in 3usize..10, r in 0.05f64..2.0) {
        let (mut rng, d) = setup(seed, m);
        let c = random_interior(&mut rng, &d, 0.05);
        let ball = d.hilbert_ball(c, r).unwrap();
        prop_assert!(ball.boundary.contains(c, 0.0));
        prop_assert!(ball.boundary.len() <= 2 * m);
        for &v in ball.boundary.vertices() {
            prop_assert!((d.distance_unchecked(c, v) - r).abs() <= 1e-7);
        }
    }

    #[test]
    fn sectors_tile_the_domain(seed in any::<u64>(), m in 3usize..9) {
        let (mut rng, d) = setup(seed, m);
        let (s, t) = (random_interior(&mut rng, &d, 0.02), random_interior(&mut rng, &d, 0.02));
        prop_assume!(s.dist(t) > 1e-3 * d.diameter());
        let sectors = sector_decomposition(&d, s, t).unwrap();
        let total: f64 = sectors.iter().map(|c| c.region.area()).sum();
        prop_assert!((total - d.polygon().area()).abs() <= 1e-9 * d.polygon().area());
        for sec in &sectors {
            let probe = sec.region.centroid();
            prop_assert_eq!(SectorLabels::at(&d, s, t, probe), sec.labels);
        }
    }

    #[test]
    fn bisector_samples_are_equidistant(seed in any::<u64>(), m in 3usize..9) {
        let (mut rng, d) = setup(seed, m);
        let (s, t) = (random_interior(&mut rng, &d, 0.02), random_interior(&mut rng, &d, 0.02));
        prop_assume!(s.dist(t) > 1e-2 * d.diameter());
        prop_assume!(detect_degenerate_pair(&d, s, t).unwrap().is_none());
        let curve = trace_bisector(&d, s, t).unwrap();
        prop_assert!(curve.max_residual(&d) <= 1e-6);
        for e in curve.endpoints {
            prop_assert!(d.polygon().inward_distance(e).abs() <= 1e-9 * d.diameter());
        }
    }

    #[test]
    fn two_site_halves_partition(seed in any::<u64>(), m in 3usize..9) {
        let (mut rng, d) = setup(seed, m);
        let (s, t) = (random_interior(&mut rng, &d, 0.02), random_interior(&mut rng, &d, 0.02));
        prop_assume!(s.dist(t) > 1e-2 * d.diameter());
        let (hs, ht, _) = two_site_cells(&d, ("s", s), ("t", t)).unwrap();
        let area = d.polygon().area();
        prop_assert!((hs.area() + ht.area() - area).abs() <= 1e-6 * area);
        prop_assert!(hs.contains(s) && ht.contains(t));
        for _ in 0..20 {
            let p = random_in_polygon(&mut rng, d.polygon());
            let gap = d.distance_unchecked(s, p) - d.distance_unchecked(t, p);
            if gap < -1e-6 {
                prop_assert!(hs.contains(p) && !ht.contains(p));
            } else if gap > 1e-6 {
                prop_assert!(ht.contains(p) && !hs.contains(p));
            }
        }
    }

    #[test]
    fn insertion_order_does_not_matter(seed in any::<u64>(), m in 3usize..8, n in 2usize..6) {
        let (mut rng, d) = setup(seed, m);
        let sites = random_sites(&mut rng, &d, n, 0.03, 0.03);
        let forward = VoronoiDiagram::build(d.polygon().clone(), &sites).unwrap();
        let mut reversed = sites.clone();
        reversed.reverse();
        let backward = VoronoiDiagram::build(d.polygon().clone(), &reversed).unwrap();
        let area = d.polygon().area();
        for s in &sites {
            let (a, b) = (forward.cell(&s.id).unwrap().area(), backward.cell(&s.id).unwrap().area());
            prop_assert!((a - b).abs() <= 1e-6 * area, "{}: {} vs {}", s.id, a, b);
        }
        prop_assert!(forward.area_defect() <= 1e-6 * area);
    }

    #[test]
    fn cells_agree_with_nearest_site(seed in any::<u64>(), m in 3usize..8, n in 1usize..6) {
        let (mut rng, d) = setup(seed, m);
        let sites = random_sites(&mut rng, &d, n, 0.03, 0.03);
        let diagram = VoronoiDiagram::build(d.polygon().clone(), &sites).unwrap();
        for _ in 0..50 {
            let q = random_interior(&mut rng, &d, 0.001);
            let mut dists: Vec<f64> = sites.iter().map(|s| d.distance_unchecked(s.pos, q)).collect();
            dists.sort_by(f64::total_cmp);
            // Points near a bisector may fall either side of its sampled polyline.
            if dists.len() > 1 && dists[1] - dists[0] < 1e-3 {
                continue;
            }
            let nearest = diagram.nearest_site(q).unwrap().id.clone();
            prop_assert_eq!(diagram.locate(q), Some(nearest.as_str()));
        }
    }

    #[test]
    fn dump_round_trips(seed in any::<u64>(), m in 3usize..8, n in 0usize..5) {
        let (mut rng, d) = setup(seed, m);
        let sites = random_sites(&mut rng, &d, n, 0.03, 0.03);
        let diagram = VoronoiDiagram::build(d.polygon().clone(), &sites).unwrap();
        let text = DiagramDump::of(&diagram).to_json();
        let back = DiagramDump::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        let rebuilt = back.scene.build().unwrap();
        prop_assert_eq!(DiagramDump::of(&rebuilt).to_json(), DiagramDump::of(&diagram).to_json());
    }

    #[test]
    fn numbers_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let text = format_f64(v);
        prop_assert_eq!(text.parse::<f64>().unwrap(), v);
    }

    #[test]
    fn star_intersection_is_pointwise_min(
        ra in prop::collection::vec(0.3f64..1.5, 3..24),
        rb in prop::collection::vec(0.3f64..1.5, 3..24),
        phase in 0.0f64..TAU,
        probes in prop::collection::vec((0.0f64..TAU, 0.0f64..1.5), 40),
    ) {
        let (a, b) = (star(&ra, 0.0), star(&rb, phase));
        let ab = a.intersect(&b);
        let ba = b.intersect(&a);
        prop_assert!(ab.area() <= a.area().min(b.area()) + 1e-12);
        prop_assert!((ab.area() - ba.area()).abs() <= 1e-12);
        prop_assert!((a.intersect(&a).area() - a.area()).abs() <= 1e-12);
        for (theta, r) in probes {
            let p = Point::from_angle(theta) * r;
            let inside = a.contains(p) && b.contains(p);
            let nudge = |q: Point, f: f64| q * f;
            // Skip probes within rounding of either boundary.
            if a.contains(nudge(p, 1.0 + 1e-9)) != a.contains(nudge(p, 1.0 - 1e-9))
                || b.contains(nudge(p, 1.0 + 1e-9)) != b.contains(nudge(p, 1.0 - 1e-9))
            {
                continue;
            }
            prop_assert_eq!(ab.contains(p), inside);
        }
    }

    #[test]
    fn crossing_events_are_degenerate_positions(seed in any::<u64>(), m in 3usize..8) {
        let (mut rng, d) = setup(seed, m);
        let (a, b, other) = (
            random_interior(&mut rng, &d, 0.03),
            random_interior(&mut rng, &d, 0.03),
            random_interior(&mut rng, &d, 0.03),
        );
        prop_assume!(a.dist(b) > 1e-2 * d.diameter());
        let seg = Segment::new(a, b).unwrap();
        for ev in crossing_events(&d, seg, other) {
            prop_assert!((0.0..=1.0).contains(&ev.u));
            let p = a.lerp(b, ev.u);
            if p.dist(other) <= 1e-3 * d.diameter() {
                continue;
            }
            // The vanishing point, `other` and the moving site are collinear.
            let vp = ev.vanishing_point;
            let (v, o) = ([vp.x, vp.y, vp.w], [other.x, other.y, 1.0]);
            let line = [v[1] * o[2] - v[2] * o[1], v[2] * o[0] - v[0] * o[2], v[0] * o[1] - v[1] * o[0]];
            let norm = line[0].hypot(line[1]);
            prop_assume!(norm > 0.0);
            let off = (line[0] * p.x + line[1] * p.y + line[2]) / norm;
            prop_assert!(off.abs() <= 1e-9 * d.diameter(), "offset {}", off);
        }
    }
}
