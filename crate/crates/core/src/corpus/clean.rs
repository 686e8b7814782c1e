use unicode_general_category::{get_general_category, GeneralCategory};

fn is_nonprinting(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::Control
            | GeneralCategory::Format
            | GeneralCategory::PrivateUse
            | GeneralCategory::Unassigned
    )
}

/// Replaces non-printing code points (general categories Cc, Cf, Co, Cn)
/// with spaces, collapses whitespace runs to a single space, and trims.
pub fn remove_nonprinting(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        if c.is_whitespace() || is_nonprinting(c) {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}
