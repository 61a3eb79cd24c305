use super::{GridState, Object, GRID_SIZE};
use crate::grammar::TemplateLibrary;
use crate::EnvId;

/// One-hot grid encoding: a class block per cell, an agent-position block,
/// and for Crafting an inventory-presence block.
#[derive(Debug, Clone)]
pub struct GridEncoder {
    classes: Vec<Object>,
    inventory: Vec<String>,
}

impl GridEncoder {
    pub fn new(lib: &TemplateLibrary) -> GridEncoder {
        let mut classes = Vec::new();
        let mut inventory = Vec::new();
        match lib.env_id() {
            EnvId::ColorSwitch => {
                classes.push(Object::Door { open: false });
                classes.push(Object::Door { open: true });
                for color in lib.domain("COLOR") {
                    for on in [false, true] {
                        classes.push(Object::Switch {
                            color: color.clone(),
                            on,
                        });
                    }
                }
            }
            EnvId::Pushblock => {
                classes.push(Object::Door { open: false });
                classes.push(Object::Door { open: true });
                classes.push(Object::Block);
            }
            EnvId::Crafting => {
                for item in lib.domain("CRAFTING_ITEM") {
                    classes.push(Object::Item(item.clone()));
                }
                for loc in lib.domain("LOCATION") {
                    classes.push(Object::Station(loc.clone()));
                }
                inventory.extend(lib.domain("CRAFTING_ITEM").iter().cloned());
                inventory.extend(lib.domain("CREATED_ITEM").iter().cloned());
            }
            EnvId::Cartpole => {}
        }
        GridEncoder { classes, inventory }
    }

    /// Classes per cell, counting "empty".
    pub fn channels(&self) -> usize {
        self.classes.len() + 1
    }

    pub fn len(&self) -> usize {
        let cells = GRID_SIZE * GRID_SIZE;
        cells * self.channels() + cells + self.inventory.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn encode(&self, state: &GridState) -> Vec<f64> {
        let cells = GRID_SIZE * GRID_SIZE;
        let ch = self.channels();
        let mut out = vec![0.0; self.len()];
        for (i, slot) in state.cells.iter().enumerate() {
            let class = match slot {
                None => 0,
                // Unknown objects fall back to "empty" so the block stays one-hot.
                Some(o) => self
                    .classes
                    .iter()
                    .position(|c| c == o)
                    .map_or(0, |p| p + 1),
            };
            out[i * ch + class] = 1.0;
        }
        out[cells * ch + GridState::index(state.agent)] = 1.0;
        for (j, item) in self.inventory.iter().enumerate() {
            if state.held(item) > 0 {
                out[cells * ch + cells + j] = 1.0;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        let len = |e| GridEncoder::new(&TemplateLibrary::builtin(e)).len();
        assert_eq!(len(EnvId::ColorSwitch), 25 * 11 + 25);
        assert_eq!(len(EnvId::Pushblock), 25 * 4 + 25);
        assert_eq!(len(EnvId::Crafting), 25 * 7 + 25 + 7);
    }

    #[test]
    fn blocks_are_one_hot() {
        let enc = GridEncoder::new(&TemplateLibrary::builtin(EnvId::ColorSwitch));
        let mut g = GridState::new((4, 0));
        g.put((0, 4), Object::Door { open: false });
        g.put(
            (1, 1),
            Object::Switch {
                color: "red".into(),
                on: true,
            },
        );
        let v = enc.encode(&g);
        for cell in v[..25 * 11].chunks(11) {
            assert_eq!(cell.iter().sum::<f64>(), 1.0);
        }
        assert_eq!(v[25 * 11..].iter().sum::<f64>(), 1.0);
        // red is the second color, "on" the second polarity
        assert_eq!(v[6 * 11 + 3 + 2 + 1], 1.0);
    }
}
