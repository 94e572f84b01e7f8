//! The grid view: every value gets a room, every room a single move.
//!
//! Value `n = (2t + 1) * 2^f` lives in tower `t`, floor `f`; the
//! decomposition is unique, so rooms and values are in bijection. Ground
//! floors hold the odd values, higher floors their doublings. From any
//! room except 1's the occupant has exactly one move: even values ride
//! down one floor (a green edge), odd ground-floor values jump to
//! another tower's upper floor via `3n + 1` (a red edge).

use num_integer::Integer;

/// Edge classification in the move graph: green halves, red is `3n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeColor {
    Green,
    Red,
}

impl EdgeColor {
    pub fn name(self) -> &'static str {
        match self {
            EdgeColor::Green => "green",
            EdgeColor::Red => "red",
        }
    }
}

/// Grid room of a value: which tower, which floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HotelCoord {
    pub tower: u64,
    pub floor: u64,
}

/// Room of `n >= 1`: floor is the exponent of two, tower indexes the odd
/// part `2t + 1`.
pub fn hotel_coord(n: u64) -> HotelCoord {
    assert!(n >= 1, "rooms exist for n >= 1");
    let floor = u64::from(n.trailing_zeros());
    let odd = n >> floor;
    HotelCoord {
        tower: (odd - 1) / 2,
        floor,
    }
}

/// A finite window onto the move graph: the vertices `1..=max_n` and the
/// moves between them.
///
/// Every vertex except 1 has an outgoing move in the full graph; a window
/// only materializes the moves whose far end also falls inside it, so
/// exported windows are closed. The bound keeps `3v + 1` inside `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HotelGraph {
    max_n: u64,
}

impl HotelGraph {
    pub fn new(max_n: u64) -> HotelGraph {
        assert!(max_n >= 1, "the window needs at least vertex 1");
        assert!(max_n <= 1 << 62, "3v + 1 must stay inside u64");
        HotelGraph { max_n }
    }

    pub fn max_n(&self) -> u64 {
        self.max_n
    }

    /// The single move out of `v` in the full graph; 1 stays put.
    pub fn outgoing(&self, v: u64) -> Option<(u64, EdgeColor)> {
        assert!(v >= 1, "rooms exist for v >= 1");
        if v == 1 {
            return None;
        }
        if v.is_even() {
            Some((v / 2, EdgeColor::Green))
        } else {
            Some((3 * v + 1, EdgeColor::Red))
        }
    }

    /// The window's vertices, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = u64> {
        1..=self.max_n
    }

    /// The moves with both ends inside the window, ascending by source.
    pub fn edges_within(&self) -> Vec<(u64, u64, EdgeColor)> {
        self.vertices()
            .filter_map(|v| {
                let (to, color) = self.outgoing(v)?;
                (to <= self.max_n).then_some((v, to, color))
            })
            .collect()
    }
}
