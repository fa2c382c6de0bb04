#![allow(dead_code)]

use std::collections::HashMap;

use cnlql::semantics::{BoolExpr, QlExpr};

pub const INTRO_NSRA: &str = "An object of Cipher invokes init.";

pub const INTRO_QL: &str = r#"from MethodAccess init
where init.getMethod().getName() = "init" and
init.getReceiverType().getName() = "Cipher"
select init"#;

pub const NEGATIVE_NSRA: &str = "An object of Cipher doesn't invoke init.";

pub const NEGATIVE_QL: &str = r#"from
where not (exists (MethodAccess init | init.getMethod().getName() = "init" and
init.getReceiverType().getName() = "Cipher"))"#;

pub const TASK1_NSRA: &str = include_str!("../data/task1.nsra");
pub const TASK2_NSRA: &str = include_str!("../data/task2.nsra");
pub const TASK3_NSRA: &str = include_str!("../data/task3.nsra");

/// Reference query for the key vs. algorithm task, as published.
pub const LISTING2: &str = r#"from MethodAccess getInstance, MethodAccess init
where init.getMethod().getName() = "init" and init.getReceiverType().getName() = "Cipher" and getInstance.getMethod().getName() = "getInstance" and getInstance.getReceiverType().getName() = "Cipher" and (((init.getArgument(0).toString() = "Cipher.WRAP MODE" or init.getArgument(0).toString() = "Cipher.UNWRAP MODE") or (init.getArgument(1).getType().toString() = "java.security.PublicKey" or init.getArgument(1).getType().toString() = "java.security.PrivateKey" or init.getArgument(1).toString() = "java.security.cert.Certificate")) and not(getInstance.getArgument(0).toString().replaceAll("\","").splitAt("/",0) = "RSA"))
select getInstance, init"#;

/// Reference query for the algorithm vs. mode task, as published.
pub const LISTING3: &str = include_str!("../data/listing3.ql");

/// Reference query for the mode vs. signature task, as published.
pub const LISTING4: &str = r#"from MethodAccess getInstance, MethodAccess init
where init.getMethod().getName() = "init" and init.getReceiverType().getName() = "Cipher" and getInstance.getMethod().getName() = "getInstance" and getInstance.getReceiverType().getName() = "Cipher" and ((getInstance.getArgument(0).toString().replaceAll("\"","").splitAt("/", 1) = "CBC" or getInstance.getArgument(0).toString().replaceAll("\"","").splitAt("/", 1) = "PCBC" or getInstance.getArgument(0).toString().replaceAll("\"","").splitAt("/", 1) = "CTR" and getInstance.getArgument(0).toString().replaceAll("\"","").splitAt("/", 1) = "CTS" or getInstance.getArgument(0).toString().replaceAll("\"","").splitAt("/", 1) = "CFB" or getInstance.getArgument(0).toString().replaceAll("\"","").splitAt("/", 1) = "OFB") and not (init.getArgument(0).toString() = "Cipher.ENCRYPT_MODE")) and ((count (getInstance.getAnArgument()) = 2 and getInstance.getArgument(0).getType().toString() = "int" and getInstance.getArgument(1).getType().toString() = "Certificate") or (count (getInstance.getAnArgument()) = 3 and getInstance.getArgument(0).getType().toString() = "int" and getInstance.getArgument(1).getType().toString() = "Certificate" and getInstance.getArgument(2).getType().toString() = "SecureRandom") or (count (getInstance.getAnArgument()) = 2 and getInstance.getArgument(0).getType().toString() = "int" and getInstance.getArgument(1).getType().toString() = "Key") or (count (getInstance.getAnArgument()) = 3 and getInstance.getArgument(0).getType().toString() = "int" and getInstance.getArgument(1).getType().toString() = "Key" and getInstance.getArgument(2).getType().toString() = "SecureRandom"))
select init, getInstance"#;

/// A textual correction applied to a reference listing before comparison.
pub struct Patch {
    pub from: &'static str,
    pub to: &'static str,
    pub why: &'static str,
}

/// The escape fix alone, so the listing lexes; used for counting.
pub const LISTING2_ESCAPE: Patch = Patch {
    from: r#"replaceAll("\","")"#,
    to: r#"replaceAll("\"","")"#,
    why: "the published string literal lost its escaped quote and does not lex",
};

pub const LISTING2_PATCHES: &[Patch] = &[
    LISTING2_ESCAPE,
    Patch {
        from: r#"init.getArgument(1).toString() = "java.security.cert.Certificate""#,
        to: r#"init.getArgument(1).getType().toString() = "java.security.cert.Certificate""#,
        why: "every `type of` comparison goes through getType(); the Certificate case dropped it",
    },
    Patch {
        from: "from MethodAccess getInstance, MethodAccess init",
        to: "from MethodAccess init, MethodAccess getInstance",
        why: "declarations follow first mention in the query, which invokes init first",
    },
    Patch {
        from: "select getInstance, init",
        to: "select init, getInstance",
        why: "selects follow declaration order",
    },
];

pub const LISTING4_PATCHES: &[Patch] = &[
    Patch {
        from: r#"where init.getMethod().getName() = "init" and init.getReceiverType().getName() = "Cipher" and getInstance.getMethod().getName() = "getInstance" and getInstance.getReceiverType().getName() = "Cipher""#,
        to: r#"where getInstance.getMethod().getName() = "getInstance" and getInstance.getReceiverType().getName() = "Cipher" and init.getMethod().getName() = "init" and init.getReceiverType().getName() = "Cipher""#,
        why: "invocation conditions follow the order of the invocation sentences",
    },
    Patch {
        from: r#"= "CTR" and getInstance"#,
        to: r#"= "CTR" or getInstance"#,
        why: "membership expands to a disjunction; the CTR/CTS join is a typo",
    },
    Patch {
        from: "select init, getInstance",
        to: "select getInstance, init",
        why: "selects follow declaration order",
    },
];

/// Applies each patch once; a patch that no longer matches is a test bug.
pub fn patched(text: &str, patches: &[Patch]) -> String {
    let mut out = text.to_string();
    for p in patches {
        assert_eq!(
            out.matches(p.from).count(),
            1,
            "patch must match exactly once: {}",
            p.why
        );
        out = out.replacen(p.from, p.to, 1);
    }
    out
}

/// Evaluates a condition; comparisons and `exists` are decided by `atom`.
pub fn eval(e: &BoolExpr, atom: &dyn Fn(&BoolExpr) -> bool) -> bool {
    match e {
        BoolExpr::True => true,
        BoolExpr::Not(inner) => !eval(inner, atom),
        BoolExpr::And(items) => items.iter().all(|i| eval(i, atom)),
        BoolExpr::Or(items) => items.iter().any(|i| eval(i, atom)),
        BoolExpr::Eq(..) | BoolExpr::Lt(..) | BoolExpr::Exists { .. } => atom(e),
    }
}

/// Atom `p<i>` as the comparison `p<i> = 1`.
pub fn prop(i: usize) -> BoolExpr {
    BoolExpr::eq(QlExpr::var(format!("p{i}")), QlExpr::int(1))
}

/// Truth of `prop(i)` atoms under the bit assignment `bits`.
pub fn by_bits(bits: u32) -> impl Fn(&BoolExpr) -> bool {
    move |e| match e {
        BoolExpr::Eq(QlExpr::Var(v), _) => {
            let i: u32 = v.trim_start_matches('p').parse().expect("prop atom");
            bits >> i & 1 == 1
        }
        other => panic!("unexpected atom {other:?}"),
    }
}

/// Every distinct comparison or `exists` in `e`, in first-occurrence order.
pub fn atoms(e: &BoolExpr) -> Vec<BoolExpr> {
    fn walk(e: &BoolExpr, out: &mut Vec<BoolExpr>) {
        match e {
            BoolExpr::True => {}
            BoolExpr::Not(inner) => walk(inner, out),
            BoolExpr::And(items) | BoolExpr::Or(items) => items.iter().for_each(|i| walk(i, out)),
            atom => {
                if !out.contains(atom) {
                    out.push(atom.clone());
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(e, &mut out);
    out
}

/// True when `a` and `b` agree under every assignment to their shared atoms.
pub fn equivalent(a: &BoolExpr, b: &BoolExpr) -> bool {
    let mut all = atoms(a);
    for x in atoms(b) {
        if !all.contains(&x) {
            all.push(x);
        }
    }
    assert!(all.len() <= 16, "too many atoms for a truth table");
    let index: HashMap<String, usize> = all
        .iter()
        .enumerate()
        .map(|(i, x)| (format!("{x:?}"), i))
        .collect();
    (0u32..1 << all.len()).all(|bits| {
        let f = |x: &BoolExpr| bits >> index[&format!("{x:?}")] & 1 == 1;
        eval(a, &f) == eval(b, &f)
    })
}
