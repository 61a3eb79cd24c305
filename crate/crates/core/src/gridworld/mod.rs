//! The shared 5×5 grid engine behind ColorSwitch, Pushblock and Crafting.

mod dynamics;
mod observe;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::truth::Condition;
use crate::world::Entity;

pub use observe::GridEncoder;

pub const GRID_SIZE: usize = 5;

/// The door sits on the top-right boundary cell.
pub const DOOR_CELL: Cell = (0, GRID_SIZE - 1);

/// `(row, col)` with row 0 at the top.
pub type Cell = (usize, usize);

/// Anything other than the agent that can occupy a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Object {
    Door { open: bool },
    Switch { color: String, on: bool },
    Block,
    Item(String),
    Station(String),
}

/// Observable per-entity state used to detect item changes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ItemState {
    Flag(bool),
    Cell(Cell),
    Held(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridState {
    pub agent: Cell,
    /// Row-major, one slot per cell.
    pub cells: Vec<Option<Object>>,
    pub inventory: BTreeMap<String, u32>,
}

impl GridState {
    pub fn new(agent: Cell) -> GridState {
        GridState {
            agent,
            cells: vec![None; GRID_SIZE * GRID_SIZE],
            inventory: BTreeMap::new(),
        }
    }

    pub fn index((row, col): Cell) -> usize {
        row * GRID_SIZE + col
    }

    pub fn cell_of(index: usize) -> Cell {
        (index / GRID_SIZE, index % GRID_SIZE)
    }

    pub fn get(&self, cell: Cell) -> Option<&Object> {
        self.cells[Self::index(cell)].as_ref()
    }

    pub fn put(&mut self, cell: Cell, object: Object) {
        self.cells[Self::index(cell)] = Some(object);
    }

    pub fn objects(&self) -> impl Iterator<Item = (Cell, &Object)> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.as_ref().map(|o| (Self::cell_of(i), o)))
    }

    pub fn find(&self, pred: impl Fn(&Object) -> bool) -> Option<(Cell, &Object)> {
        self.objects().find(|(_, o)| pred(o))
    }

    pub fn door(&self) -> Option<bool> {
        self.objects().find_map(|(_, o)| match o {
            Object::Door { open } => Some(*open),
            _ => None,
        })
    }

    pub fn block(&self) -> Option<Cell> {
        self.find(|o| matches!(o, Object::Block)).map(|(c, _)| c)
    }

    pub fn switch(&self, color: &str) -> Option<bool> {
        self.objects().find_map(|(_, o)| match o {
            Object::Switch { color: c, on } if c == color => Some(*on),
            _ => None,
        })
    }

    pub fn held(&self, item: &str) -> u32 {
        self.inventory.get(item).copied().unwrap_or(0)
    }

    /// Name of the station under the agent, if any.
    pub fn station_here(&self) -> Option<&str> {
        match self.get(self.agent) {
            Some(Object::Station(s)) => Some(s),
            _ => None,
        }
    }

    pub fn eval(&self, cond: &Condition) -> Result<bool> {
        match cond {
            Condition::SwitchIs { color, on } => self
                .switch(color)
                .map(|s| s == *on)
                .ok_or_else(|| Error::MissingEntity(format!("{color} switch"))),
            Condition::DoorOpen => self
                .door()
                .ok_or_else(|| Error::MissingEntity("door".into())),
            Condition::BlockIn(r) => self
                .block()
                .map(|c| r.contains(c, GRID_SIZE))
                .ok_or_else(|| Error::MissingEntity("pushblock".into())),
            Condition::At(loc) => {
                if self
                    .find(|o| matches!(o, Object::Station(s) if s == loc))
                    .is_none()
                {
                    return Err(Error::MissingEntity(loc.clone()));
                }
                Ok(self.station_here() == Some(loc.as_str()))
            }
            Condition::Has(item) => Ok(self.held(item) > 0),
            Condition::All(cs) => {
                let mut all = true;
                for c in cs {
                    all &= self.eval(c)?;
                }
                Ok(all)
            }
            Condition::InZone(_) | Condition::Effect(_) | Condition::EffectOfKind(_) => {
                Err(Error::EnvMismatch)
            }
        }
    }

    /// State of every non-agent entity whose state can change.
    pub fn item_states(&self) -> BTreeMap<Entity, ItemState> {
        let mut out = BTreeMap::new();
        for (cell, o) in self.objects() {
            match o {
                Object::Door { open } => {
                    out.insert(Entity::Door, ItemState::Flag(*open));
                }
                Object::Switch { color, on } => {
                    out.insert(Entity::Switch(color.clone()), ItemState::Flag(*on));
                }
                Object::Block => {
                    out.insert(Entity::Block, ItemState::Cell(cell));
                }
                Object::Item(name) => {
                    out.insert(Entity::Item(name.clone()), ItemState::Cell(cell));
                }
                Object::Station(_) => {}
            }
        }
        for (name, &n) in &self.inventory {
            // An item on the grid and in the inventory share the entity key,
            // so the held count takes precedence once picked up.
            out.insert(Entity::Item(name.clone()), ItemState::Held(n));
        }
        out
    }
}

impl fmt::Display for GridState {
    /// ASCII debug view.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in 0..GRID_SIZE {
            for col in 0..GRID_SIZE {
                let glyph = if (row, col) == self.agent {
                    '@'
                } else {
                    match self.get((row, col)) {
                        None => '.',
                        Some(Object::Door { open: true }) => '/',
                        Some(Object::Door { open: false }) => '#',
                        Some(Object::Switch { color, on }) => {
                            let c = color.chars().next().unwrap_or('s');
                            if *on {
                                c.to_ascii_uppercase()
                            } else {
                                c
                            }
                        }
                        Some(Object::Block) => 'B',
                        Some(Object::Item(_)) => '*',
                        Some(Object::Station(_)) => 'T',
                    }
                };
                write!(f, "{glyph}")?;
            }
            writeln!(f)?;
        }
        if !self.inventory.is_empty() {
            let items: Vec<String> = self
                .inventory
                .iter()
                .map(|(k, v)| format!("{k}x{v}"))
                .collect();
            writeln!(f, "inventory: {}", items.join(" "))?;
        }
        Ok(())
    }
}
