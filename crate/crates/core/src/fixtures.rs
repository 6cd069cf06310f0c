//! Standard example knowledge bases.

use crate::kb::KnowledgeBase;

pub const PENGUIN: &str = "\
# penguin triangle
penguin |~ bird
penguin |~ !fly
bird |~ fly
";

pub const NIXON: &str = "\
# Nixon diamond
republican |~ !pacifist
quaker |~ pacifist
";

pub fn penguin() -> KnowledgeBase {
    KnowledgeBase::parse(PENGUIN).expect("fixture parses")
}

pub fn nixon() -> KnowledgeBase {
    KnowledgeBase::parse(NIXON).expect("fixture parses")
}
