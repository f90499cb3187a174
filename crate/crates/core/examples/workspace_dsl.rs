//! Loading definitions from text and printing them back.

use hyperquasi::semantics::hyper_satisfies_theory;
use hyperquasi::workspace::Workspace;

const SOURCE: &str = "
signature M { op/2; e/0; }

algebra Z2 over M {
  elements 0 1;
  op = [[0, 1], [1, 0]];
  e = 0;
}

hypersub flip over M { op(x, y) -> op(y, x); e -> e; }
monoid Flip over M { generators flip; cap 4 }

theory Group over M {
  vars x, y;
  op(x, e) = x;
  op(x, y) = op(y, x);
  op(x, x) = e;
}
";

fn main() {
    let ws = Workspace::parse(SOURCE).unwrap();
    print!("{}", ws.render_all());
    let z2 = ws.algebra("Z2").unwrap();
    let v = hyper_satisfies_theory(
        z2,
        ws.theory("Group").unwrap(),
        &ws.monoid("Flip").unwrap().spec,
    )
    .unwrap();
    println!("Z2 satisfies Group under Flip: {}", v.holds());

    match Workspace::parse("signature M { op/2; }\nalgebra A over M { elements 0; op = [[0, 0]]; }")
    {
        Ok(_) => println!("bad table accepted"),
        Err(e) => println!("error: {e}"),
    }
}
