use super::{Cell, GridState, Object, GRID_SIZE};
use crate::world::Law;
use crate::Action;

fn offset(action: Action) -> Option<(isize, isize)> {
    match action {
        Action::Up => Some((-1, 0)),
        Action::Down => Some((1, 0)),
        Action::Left => Some((0, -1)),
        Action::Right => Some((0, 1)),
        _ => None,
    }
}

fn shifted((row, col): Cell, (dr, dc): (isize, isize)) -> Option<Cell> {
    let r = row.checked_add_signed(dr)?;
    let c = col.checked_add_signed(dc)?;
    (r < GRID_SIZE && c < GRID_SIZE).then_some((r, c))
}

impl GridState {
    /// Applies one world action under `law`. Answer and stop actions are
    /// ignored here; the episode handles them.
    pub fn apply(&mut self, action: Action, law: &Law) {
        if let Some(delta) = offset(action) {
            self.walk(delta);
        } else {
            match action {
                Action::Toggle => {
                    let i = Self::index(self.agent);
                    if let Some(Object::Switch { on, .. }) = &mut self.cells[i] {
                        *on = !*on;
                    }
                }
                Action::Pickup => {
                    let i = Self::index(self.agent);
                    if let Some(Object::Item(name)) = &self.cells[i] {
                        *self.inventory.entry(name.clone()).or_insert(0) += 1;
                        self.cells[i] = None;
                    }
                }
                Action::Craft => {
                    if let Law::Recipe {
                        ingredient,
                        location,
                        output,
                        ..
                    } = law
                    {
                        if self.station_here() == Some(location.as_str())
                            && self.held(ingredient) > 0
                        {
                            *self.inventory.entry(output.clone()).or_insert(0) += 1;
                        }
                    }
                }
                _ => {}
            }
        }
        self.refresh_door(law);
    }

    fn walk(&mut self, delta: (isize, isize)) {
        let Some(target) = shifted(self.agent, delta) else {
            return;
        };
        match self.get(target) {
            Some(Object::Door { open: false }) => {}
            Some(Object::Block) => {
                let beyond = shifted(target, delta);
                if let Some(beyond) = beyond.filter(|&b| self.get(b).is_none()) {
                    self.cells[Self::index(target)] = None;
                    self.put(beyond, Object::Block);
                    self.agent = target;
                }
            }
            _ => self.agent = target,
        }
    }

    /// Recomputes the door from the law.
    pub fn refresh_door(&mut self, law: &Law) {
        let open = match law {
            Law::Switch { color, on } => self.switch(color) == Some(*on),
            Law::Block(region) => self.block().is_some_and(|b| region.contains(b, GRID_SIZE)),
            _ => return,
        };
        for o in self.cells.iter_mut().flatten() {
            if let Object::Door { open: d } = o {
                *d = open;
            }
        }
    }
}
