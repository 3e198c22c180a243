use serde::{Deserialize, Serialize};

use super::FiniteSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub order: usize,
    pub regular: bool,
    pub inverse: bool,
    pub union_of_groups: bool,
    pub orthodox: bool,
    pub e_solid: bool,
    pub rectangular_band: bool,
    pub satisfies_x_eq_x3: bool,
    pub idempotent_count: usize,
    pub d_class_count: usize,
}

pub fn structure_report(s: &FiniteSemigroup) -> StructureReport {
    let idempotents = s.idempotents();
    let regular = s.is_regular();
    let inverse = regular && s.elements().all(|a| s.inverses_of(a).len() == 1);
    let union_of_groups = s.elements().all(|a| s.is_group_element(a));
    let e_closed = idempotents
        .iter()
        .all(|&e| idempotents.iter().all(|&f| s.is_idempotent(s.mul(e, f))));
    let orthodox = regular && e_closed;
    let e_solid = regular
        && s.generated_subsemigroup(&idempotents)
            .into_iter()
            .all(|x| s.is_group_element(x));
    let rectangular_band = s.elements().all(|x| s.elements().all(|y| s.mul3(x, y, x) == x));
    let satisfies_x_eq_x3 = s.elements().all(|x| s.mul3(x, x, x) == x);
    StructureReport {
        order: s.order(),
        regular,
        inverse,
        union_of_groups,
        orthodox,
        e_solid,
        rectangular_band,
        satisfies_x_eq_x3,
        idempotent_count: idempotents.len(),
        d_class_count: s.green_relations().d_classes().len(),
    }
}
