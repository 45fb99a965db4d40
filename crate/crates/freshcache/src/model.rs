//! Domain types shared by every other module: per-item parameters, cost
//! coefficients, catalogs, and the mutable per-item simulation state.
//!
//! A catalog describes `N` unit-size content items served by an edge cache.
//! Requests arrive as a Poisson stream with aggregate rate `beta`; a request
//! targets item `n` with probability `p_n`. Each item independently receives
//! back-end updates as a Poisson stream with rate `lambda_n`. Freshness is
//! measured as the integer number of updates the back end has applied since
//! the cached copy was last fetched.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One content item: its share of the request stream and its update rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ItemParams {
    /// Probability that an incoming request targets this item (0 ≤ p ≤ 1).
    #[serde(rename = "p")]
    pub popularity: f64,
    /// Back-end update rate (updates per unit time, ≥ 0).
    /// Zero models static content that never changes.
    #[serde(rename = "lambda")]
    pub update_rate: f64,
}

impl ItemParams {
    pub fn new(popularity: f64, update_rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&popularity) || !popularity.is_finite() {
            return Err(Error::invalid(
                "popularity",
                format!("must lie in [0, 1], got {popularity}"),
            ));
        }
        if !(update_rate >= 0.0) || !update_rate.is_finite() {
            return Err(Error::invalid(
                "update_rate",
                format!("must be a finite nonnegative rate, got {update_rate}"),
            ));
        }
        Ok(Self {
            popularity,
            update_rate,
        })
    }

    /// Per-item request rate given the aggregate catalog request rate.
    pub fn demand(&self, request_rate: f64) -> f64 {
        request_rate * self.popularity
    }
}

/// Cost coefficients: a flat charge per fetch from the back end, and an
/// aging charge per unit of version age on every request served stale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    #[serde(rename = "c_f")]
    pub fetch_cost: f64,
    #[serde(rename = "c_a")]
    pub age_cost: f64,
}

impl CostParams {
    pub fn new(fetch_cost: f64, age_cost: f64) -> Result<Self> {
        if !(fetch_cost > 0.0) || !fetch_cost.is_finite() {
            return Err(Error::invalid(
                "fetch_cost",
                format!("must be a finite positive cost, got {fetch_cost}"),
            ));
        }
        if !(age_cost >= 0.0) || !age_cost.is_finite() {
            return Err(Error::invalid(
                "age_cost",
                format!("must be a finite nonnegative cost, got {age_cost}"),
            ));
        }
        Ok(Self {
            fetch_cost,
            age_cost,
        })
    }
}

/// A full catalog: items (popularity sums to one), the aggregate request
/// rate, and the cost coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub items: Vec<ItemParams>,
    #[serde(rename = "beta")]
    pub request_rate: f64,
    pub costs: CostParams,
}

impl Catalog {
    /// Validates the popularity distribution (Σp = 1 within 1e-9) and rates.
    pub fn new(items: Vec<ItemParams>, request_rate: f64, costs: CostParams) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::invalid("items", "catalog must contain at least one item"));
        }
        if !(request_rate >= 0.0) || !request_rate.is_finite() {
            return Err(Error::invalid(
                "request_rate",
                format!("must be a finite nonnegative rate, got {request_rate}"),
            ));
        }
        let total: f64 = compensated_sum(items.iter().map(|it| it.popularity));
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "items",
                format!("popularities must sum to 1 (within 1e-9), got {total}"),
            ));
        }
        for (idx, it) in items.iter().enumerate() {
            ItemParams::new(it.popularity, it.update_rate).map_err(|e| match e {
                Error::InvalidParameter { field, message } => Error::InvalidParameter {
                    field,
                    message: format!("item {idx}: {message}"),
                },
                other => other,
            })?;
        }
        Ok(Self {
            items,
            request_rate,
            costs,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// How per-item update rates are assigned when generating a catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RefreshProfile {
    /// Every item updates at the same rate.
    Constant { lambda: f64 },
    /// Rates proportional to `1/n^alpha`, scaled so their arithmetic mean
    /// equals `lambda_avg`. Negative `alpha` makes popular items the
    /// slowest to refresh.
    ZipfWeighted { alpha: f64, lambda_avg: f64 },
    /// One explicit rate per item.
    Explicit { values: Vec<f64> },
}

/// Recipe for a synthetic catalog: item count, popularity skew, and the
/// refresh-rate profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecipe {
    pub n_items: usize,
    pub zipf_popularity_z: f64,
    pub refresh_profile: RefreshProfile,
}

impl CatalogRecipe {
    pub fn validate(&self) -> Result<()> {
        if self.n_items == 0 {
            return Err(Error::invalid("n_items", "must be at least 1"));
        }
        if !self.zipf_popularity_z.is_finite() {
            return Err(Error::invalid("zipf_popularity_z", "must be finite"));
        }
        match &self.refresh_profile {
            RefreshProfile::Constant { lambda } => {
                if !(*lambda >= 0.0) || !lambda.is_finite() {
                    return Err(Error::invalid(
                        "lambda",
                        format!("must be a finite nonnegative rate, got {lambda}"),
                    ));
                }
            }
            RefreshProfile::ZipfWeighted { alpha, lambda_avg } => {
                if !alpha.is_finite() {
                    return Err(Error::invalid("alpha", "must be finite"));
                }
                if !(*lambda_avg >= 0.0) || !lambda_avg.is_finite() {
                    return Err(Error::invalid(
                        "lambda_avg",
                        format!("must be a finite nonnegative rate, got {lambda_avg}"),
                    ));
                }
            }
            RefreshProfile::Explicit { values } => {
                if values.len() != self.n_items {
                    return Err(Error::invalid(
                        "values",
                        format!(
                            "explicit profile must list {} rates, got {}",
                            self.n_items,
                            values.len()
                        ),
                    ));
                }
                if let Some(bad) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
                    return Err(Error::invalid(
                        "values",
                        format!("rates must be finite and nonnegative, found {bad}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Builds a catalog deterministically from a recipe.
///
/// Popularities follow `p_n = p_0 / n^z` for ranks `n = 1..=N`, normalized
/// by the generalized harmonic number so they sum to one. `z = 0` reduces
/// to the uniform distribution; negative exponents invert the skew. No
/// randomness is involved: the same recipe always yields the same catalog.
pub fn build_catalog(recipe: &CatalogRecipe, request_rate: f64, costs: CostParams) -> Result<Catalog> {
    recipe.validate()?;
    let n = recipe.n_items;
    let z = recipe.zipf_popularity_z;

    let weights: Vec<f64> = (1..=n).map(|rank| (rank as f64).powf(-z)).collect();
    let norm = compensated_sum(weights.iter().copied());
    let rates = refresh_rates(&recipe.refresh_profile, n)?;

    let items: Vec<ItemParams> = weights
        .iter()
        .zip(rates)
        .map(|(w, lambda)| ItemParams {
            popularity: w / norm,
            update_rate: lambda,
        })
        .collect();
    Catalog::new(items, request_rate, costs)
}

fn refresh_rates(profile: &RefreshProfile, n: usize) -> Result<Vec<f64>> {
    match profile {
        RefreshProfile::Constant { lambda } => Ok(vec![*lambda; n]),
        RefreshProfile::ZipfWeighted { alpha, lambda_avg } => {
            let raw: Vec<f64> = (1..=n).map(|rank| (rank as f64).powf(-alpha)).collect();
            let mean = compensated_sum(raw.iter().copied()) / n as f64;
            Ok(raw.iter().map(|w| lambda_avg * w / mean).collect())
        }
        RefreshProfile::Explicit { values } => Ok(values.clone()),
    }
}

/// Kahan compensated summation; keeps popularity normalization accurate for
/// catalogs up to 10^6 items.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Mutable per-item state tracked while simulating: the version age of the
/// cached copy, the wall time elapsed since it was last fetched, and the
/// time of the most recent event.
///
/// The age counts back-end updates applied since the most recent fetch and
/// resets to zero exactly when a fetch occurs; `elapsed` resets at the same
/// instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItemState {
    pub age: u64,
    pub elapsed: f64,
    pub last_event_time: f64,
}

impl ItemState {
    /// State of an item fetched fresh at time `now`.
    pub fn fresh(now: f64) -> Self {
        Self {
            age: 0,
            elapsed: 0.0,
            last_event_time: now,
        }
    }

    /// Advances the elapsed clock to `now` without changing the age.
    pub fn advance(&mut self, now: f64) {
        debug_assert!(now >= self.last_event_time);
        self.elapsed += now - self.last_event_time;
        self.last_event_time = now;
    }

    /// Records a back-end update arriving at `now`.
    pub fn apply_update(&mut self, now: f64) {
        self.advance(now);
        self.age += 1;
    }

    /// Records a fetch completing at `now`: age and elapsed both reset.
    pub fn apply_fetch(&mut self, now: f64) {
        self.advance(now);
        self.age = 0;
        self.elapsed = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn costs() -> CostParams {
        CostParams::new(1.0, 0.1).unwrap()
    }

    #[test]
    fn single_item_gets_full_popularity() {
        let recipe = CatalogRecipe {
            n_items: 1,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::Constant { lambda: 0.01 },
        };
        let cat = build_catalog(&recipe, 5.0, costs()).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.items[0].popularity, 1.0);
        assert_eq!(cat.items[0].update_rate, 0.01);
        assert_eq!(cat.request_rate, 5.0);
    }

    #[test]
    fn zipf_two_items() {
        // 1/(1·H) and 1/(2·H) with H = 1.5.
        let recipe = CatalogRecipe {
            n_items: 2,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::Constant { lambda: 1.0 },
        };
        let cat = build_catalog(&recipe, 1.0, costs()).unwrap();
        assert!((cat.items[0].popularity - 2.0 / 3.0).abs() < 1e-15);
        assert!((cat.items[1].popularity - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn thousand_item_catalog_normalizes() {
        let recipe = CatalogRecipe {
            n_items: 1000,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::ZipfWeighted {
                alpha: 0.0,
                lambda_avg: 0.01,
            },
        };
        let cat = build_catalog(&recipe, 5.0, costs()).unwrap();
        let total: f64 = cat.items.iter().map(|it| it.popularity).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let mean_rate: f64 =
            cat.items.iter().map(|it| it.update_rate).sum::<f64>() / cat.len() as f64;
        assert!((mean_rate - 0.01).abs() < 1e-12);
    }

    #[test]
    fn zipf_weighted_alpha_zero_is_constant() {
        let recipe = CatalogRecipe {
            n_items: 50,
            zipf_popularity_z: 0.8,
            refresh_profile: RefreshProfile::ZipfWeighted {
                alpha: 0.0,
                lambda_avg: 0.25,
            },
        };
        let cat = build_catalog(&recipe, 1.0, costs()).unwrap();
        for it in &cat.items {
            assert!((it.update_rate - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_alpha_makes_popular_items_slow() {
        let recipe = CatalogRecipe {
            n_items: 10,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::ZipfWeighted {
                alpha: -1.0,
                lambda_avg: 0.01,
            },
        };
        let cat = build_catalog(&recipe, 1.0, costs()).unwrap();
        assert!(cat.items[0].update_rate < cat.items[9].update_rate);
        let mean: f64 = cat.items.iter().map(|it| it.update_rate).sum::<f64>() / 10.0;
        assert!((mean - 0.01).abs() < 1e-15);
    }

    #[test]
    fn zero_z_is_uniform() {
        let recipe = CatalogRecipe {
            n_items: 4,
            zipf_popularity_z: 0.0,
            refresh_profile: RefreshProfile::Constant { lambda: 1.0 },
        };
        let cat = build_catalog(&recipe, 1.0, costs()).unwrap();
        for it in &cat.items {
            assert!((it.popularity - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn catalog_construction_is_deterministic() {
        let recipe = CatalogRecipe {
            n_items: 100,
            zipf_popularity_z: 0.9,
            refresh_profile: RefreshProfile::ZipfWeighted {
                alpha: 0.5,
                lambda_avg: 0.02,
            },
        };
        let a = build_catalog(&recipe, 5.0, costs()).unwrap();
        let b = build_catalog(&recipe, 5.0, costs()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_empty_catalog_recipe() {
        let recipe = CatalogRecipe {
            n_items: 0,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::Constant { lambda: 1.0 },
        };
        let err = build_catalog(&recipe, 1.0, costs()).unwrap_err();
        assert!(err.to_string().contains("n_items"), "{err}");
    }

    #[test]
    fn rejects_negative_lambda_avg() {
        let recipe = CatalogRecipe {
            n_items: 3,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::ZipfWeighted {
                alpha: 1.0,
                lambda_avg: -0.5,
            },
        };
        let err = build_catalog(&recipe, 1.0, costs()).unwrap_err();
        assert!(err.to_string().contains("lambda_avg"), "{err}");
    }

    #[test]
    fn rejects_explicit_length_mismatch() {
        let recipe = CatalogRecipe {
            n_items: 3,
            zipf_popularity_z: 1.0,
            refresh_profile: RefreshProfile::Explicit {
                values: vec![1.0, 2.0],
            },
        };
        let err = build_catalog(&recipe, 1.0, costs()).unwrap_err();
        assert!(err.to_string().contains("values"), "{err}");
    }

    #[test]
    fn rejects_invalid_costs() {
        assert!(CostParams::new(0.0, 0.1).is_err());
        assert!(CostParams::new(1.0, -0.1).is_err());
        assert!(CostParams::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn item_state_dynamics() {
        let mut st = ItemState::fresh(0.0);
        st.apply_update(1.5);
        st.apply_update(2.0);
        assert_eq!(st.age, 2);
        assert!((st.elapsed - 2.0).abs() < 1e-15);
        st.apply_fetch(3.0);
        assert_eq!(st.age, 0);
        assert_eq!(st.elapsed, 0.0);
        st.advance(4.25);
        assert!((st.elapsed - 1.25).abs() < 1e-15);
    }
}
