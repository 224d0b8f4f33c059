//! Regenerates the example inputs under `data/`.
//!
//! Usage: `cargo run -p ktower-cli --example make_data -- data`

use std::fs;
use std::path::Path;

use ktower::algebras::{Algebra, Bimodule};
use ktower::dga::random::{acyclic_pair, exterior_extension};
use ktower::dga::DgAlgebra;
use ktower::exactla::GroundField;
use ktower_cli::io::{
    to_json, AlgebraFile, BimoduleFile, DgaFile, FieldSpec, GeneratorSpec, Manifest, ManifestEntry, ProblemFile,
    SemifreeFile,
};

fn put(root: &Path, rel: &str, text: String) -> String {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(&path, text).unwrap();
    rel.to_string()
}

fn generator(name: &str, degree: usize, d: &str) -> GeneratorSpec {
    GeneratorSpec { name: name.into(), degree, d: d.into() }
}

fn entry(file: &str, algebra: Option<&str>, bimodule: Option<&str>, n: Option<usize>) -> ManifestEntry {
    ManifestEntry {
        file: file.into(),
        algebra: algebra.map(Into::into),
        bimodule: bimodule.map(Into::into),
        n,
    }
}

fn main() {
    let root = std::env::args().nth(1).unwrap_or_else(|| "data".into());
    let root = Path::new(&root);
    let f2 = GroundField::Prime(2);
    let f3 = GroundField::Prime(3);
    let q = GroundField::Rationals;
    let mut man = Manifest { manifest: 1, ..Default::default() };

    let algebras: Vec<(&str, Algebra)> = vec![
        ("ground_f2", Algebra::ground(f2)),
        ("dual_f2", Algebra::truncated_polynomial(f2, 2)),
        ("dual_f3", Algebra::truncated_polynomial(f3, 2)),
        ("dual_q", Algebra::truncated_polynomial(q, 2)),
        ("trunc3_f2", Algebra::truncated_polynomial(f2, 3)),
        ("upper2_f2", Algebra::upper_triangular(f2, 2)),
    ];
    for (name, a) in &algebras {
        let alg = put(root, &format!("algebras/{name}.json"), to_json(&AlgebraFile::of(a)));
        man.algebras.push(alg.clone());
        let mut mods = vec![("regular", Bimodule::regular(a))];
        if a.dim() > 1 {
            mods.push(("augmentation", Bimodule::augmentation(a).unwrap()));
        }
        for (kind, m) in mods {
            let bim = put(root, &format!("bimodules/{name}_{kind}.json"), to_json(&BimoduleFile::of(&m)));
            man.bimodules.push(entry(&bim, Some(&alg), None, None));
            man.pairs.push(entry("", Some(&alg), Some(&bim), None));
        }
    }

    let dual = Algebra::truncated_polynomial(f2, 2);
    let dgas: Vec<(&str, DgAlgebra)> = vec![
        (
            "trivial_ext_dual_f2_n1",
            DgAlgebra::from_algebra(&dual).trivial_extension(&Bimodule::regular(&dual), 1).unwrap(),
        ),
        (
            "trivial_ext_dual_f3_n2",
            {
                let a = Algebra::truncated_polynomial(f3, 2);
                DgAlgebra::from_algebra(&a).trivial_extension(&Bimodule::regular(&a), 2).unwrap()
            },
        ),
        ("massey_f2", {
            let b = dual.tensor(&dual).unwrap();
            exterior_extension(&b, &f2.unit_vec(4, 3))
        }),
        ("acyclic_pair_q", acyclic_pair(q, 1)),
    ];
    for (name, c) in &dgas {
        man.dgas.push(put(root, &format!("dgas/{name}.json"), to_json(&DgaFile::of(c))));
    }

    let semifree = [
        ("tensor_x1_f2", SemifreeFile {
            field: FieldSpec::of(f2),
            window: 4,
            generators: vec![generator("x", 1, "0")],
        }),
        ("tensor_y3_q", SemifreeFile {
            field: FieldSpec::of(q),
            window: 5,
            generators: vec![generator("y", 3, "0")],
        }),
        ("killing_square_q", SemifreeFile {
            field: FieldSpec::of(q),
            window: 6,
            generators: vec![generator("x", 1, "0"), generator("y", 3, "x*x"), generator("z", 4, "1/2*x*x*x")],
        }),
    ];
    for (name, s) in &semifree {
        man.semifree.push(put(root, &format!("semifree/{name}.json"), to_json(s)));
    }

    let empty = |field, window| SemifreeFile { field: FieldSpec::of(field), window, generators: vec![] };
    let problems = [
        ("two_free_f2", ProblemFile {
            base: empty(f2, 4),
            cells_b: vec![generator("b", 1, "0")],
            cells_c: vec![generator("c", 1, "0")],
            m: 1,
            n: 1,
        }),
        ("free_2_1_q", ProblemFile {
            base: empty(q, 5),
            cells_b: vec![generator("b", 2, "0")],
            cells_c: vec![generator("c", 1, "0")],
            m: 1,
            n: 2,
        }),
        ("over_base_f3", ProblemFile {
            base: SemifreeFile {
                field: FieldSpec::of(f3),
                window: 5,
                generators: vec![generator("a", 1, "0")],
            },
            cells_b: vec![generator("v", 3, "a*a"), generator("w", 2, "0")],
            cells_c: vec![generator("c", 2, "0")],
            m: 2,
            n: 2,
        }),
    ];
    for (name, p) in &problems {
        man.problems.push(put(root, &format!("problems/{name}.json"), to_json(p)));
    }

    // class files come from `ktower hh --emit-classes`
    for (name, alg, bim, n) in [
        ("dual_f2_regular_n1", "algebras/dual_f2.json", "bimodules/dual_f2_regular.json", 1),
        ("dual_f3_regular_n1", "algebras/dual_f3.json", "bimodules/dual_f3_regular.json", 1),
    ] {
        let dir = root.join("classes").join(name);
        let out = ktower_cli::run([
            "ktower".to_string(),
            "hh".into(),
            "--algebra".into(),
            root.join(alg).display().to_string(),
            "--bimodule".into(),
            root.join(bim).display().to_string(),
            "--degree".into(),
            (n + 2).to_string(),
            "--emit-classes".into(),
            dir.display().to_string(),
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let mut files: Vec<String> = fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        files.sort();
        for f in files {
            man.classes.push(entry(&format!("classes/{name}/{f}"), Some(alg), Some(bim), Some(n)));
        }
    }

    // a realized model for the nonzero class over F_2[x]/x^2
    fs::create_dir_all(root.join("models")).unwrap();
    let (alg, bim) = ("algebras/dual_f2.json", "bimodules/dual_f2_regular.json");
    let model = "models/dual_f2_regular_n1_class1.json";
    let out = ktower_cli::run([
        "ktower".to_string(),
        "realize".into(),
        "--algebra".into(),
        root.join(alg).display().to_string(),
        "--bimodule".into(),
        root.join(bim).display().to_string(),
        "--n".into(),
        "1".into(),
        "--class".into(),
        root.join("classes/dual_f2_regular_n1/class_1.json").display().to_string(),
        "--out".into(),
        root.join(model).display().to_string(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    man.models.push(model.to_string());

    put(root, "manifest.json", to_json(&man));
}
