use crate::logic::{annotated_context, Proof};

/// A `.naw` document for `p`: declarations of its free object variables,
/// then the proof itself.
pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    for (x, ty) in annotated_context(p).iter() {
        out.push_str(&format!("(var {x} {ty})\n"));
    }
    out.push_str(&p.to_string());
    out.push('\n');
    out
}
