//! Sorted-slice intersection used by the neighbour primitives.
//!
//! Rows of the CSR arrays are strictly ascending, so two rows can be
//! intersected with a linear merge. When one row is much longer than the
//! other the shorter one drives an exponential (galloping) search into the
//! longer one instead.

/// Length ratio above which galloping replaces the linear merge.
pub const GALLOP_RATIO: usize = 32;

/// Appends `a ∩ b` to `out`. Both inputs must be strictly ascending.
pub fn intersect_into<T: Ord + Copy>(a: &[T], b: &[T], out: &mut Vec<T>) {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return;
    }
    if long.len() / short.len() > GALLOP_RATIO {
        gallop_intersect(short, long, out);
    } else {
        merge_intersect(short, long, out);
    }
}

/// Number of elements in `a ∩ b`.
pub fn intersect_count<T: Ord + Copy>(a: &[T], b: &[T]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return 0;
    }
    if long.len() / short.len() > GALLOP_RATIO {
        let mut count = 0;
        let mut base = 0;
        for x in short {
            base = gallop_to(long, base, x);
            if base == long.len() {
                break;
            }
            if long[base] == *x {
                count += 1;
                base += 1;
            }
        }
        count
    } else {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < short.len() && j < long.len() {
            match short[i].cmp(&long[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

pub(crate) fn merge_intersect<T: Ord + Copy>(a: &[T], b: &[T], out: &mut Vec<T>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

pub(crate) fn gallop_intersect<T: Ord + Copy>(short: &[T], long: &[T], out: &mut Vec<T>) {
    let mut base = 0;
    for x in short {
        base = gallop_to(long, base, x);
        if base == long.len() {
            return;
        }
        if long[base] == *x {
            out.push(*x);
            base += 1;
        }
    }
}

/// First index `>= begin` whose element is not less than `target`.
fn gallop_to<T: Ord>(slice: &[T], begin: usize, target: &T) -> usize {
    if begin >= slice.len() || slice[begin] >= *target {
        return begin;
    }
    // slice[lo] < target holds throughout
    let mut lo = begin;
    let mut step = 1;
    while lo + step < slice.len() && slice[lo + step] < *target {
        lo += step;
        step <<= 1;
    }
    let hi = (lo + step).min(slice.len());
    lo + 1 + slice[lo + 1..hi].partition_point(|v| v < target)
}
