//! Sequential / data-parallel execution switch.
//!
//! Every element loop in the crate goes through [`Execution::map`]. With the
//! `parallel` feature disabled, `Parallel` silently runs sequentially.

/// How element loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Maps `f` over `0..n`, collecting results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            Execution::Parallel => par_map(n, f),
        }
    }

    /// Like [`Execution::map`] but short-circuits on the first error.
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            Execution::Parallel => par_try_map(n, f),
        }
    }

    /// Runs `f` on every element of `items` with exclusive access.
    pub fn for_each_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter_mut().enumerate().for_each(|(i, x)| f(i, x)),
            Execution::Parallel => par_for_each_mut(items, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_try_map<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_try_map<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    F: Fn(usize) -> Result<T, E>,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_for_each_mut<T: Send, F: Fn(usize, &mut T) + Sync + Send>(items: &mut [T], f: F) {
    use rayon::prelude::*;
    items.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

#[cfg(not(feature = "parallel"))]
fn par_for_each_mut<T, F: Fn(usize, &mut T)>(items: &mut [T], f: F) {
    items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let a = Execution::Sequential.map(100, |i| i * i);
        let b = Execution::Parallel.map(100, |i| i * i);
        assert_eq!(a, b);
        let e: Result<Vec<usize>, usize> =
            Execution::Parallel.try_map(10, |i| if i == 7 { Err(i) } else { Ok(i) });
        assert_eq!(e, Err(7));
    }
}
