//! Calendar feature extraction from the input's time index.

use chrono::{DateTime, Datelike, Timelike, Utc};

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeArray};
use crate::transforms::input_x;

/// Holidays observed under the default table: Jan 1, Dec 25, Dec 26.
const DEFAULT_HOLIDAYS: &str = "01-01,12-25,12-26";

/// Extends a series with calendar information: year, month, day, weekday
/// (0 = Monday), hour, is_weekend, and is_holiday from a fixed-date table.
pub struct CalendarExtraction {
    descriptor: ModuleDescriptor,
    holidays: Vec<(u32, u32)>,
}

impl CalendarExtraction {
    pub fn new(params: &Params) -> Result<Self> {
        let table = params.get_str_or("holidays", DEFAULT_HOLIDAYS)?;
        let mut holidays = Vec::new();
        for entry in table.split(',').filter(|e| !e.trim().is_empty()) {
            holidays.push(parse_month_day(entry.trim()).ok_or_else(|| Error::InvalidParam {
                name: "holidays".into(),
                message: format!("expected MM-DD entries, got '{entry}'"),
            })?);
        }
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only("calendar", params.clone(), Some(0)),
            holidays,
        })
    }
}

fn parse_month_day(text: &str) -> Option<(u32, u32)> {
    let (m, d) = text.split_once('-')?;
    let month: u32 = m.parse().ok()?;
    let day: u32 = d.parse().ok()?;
    ((1..=12).contains(&month) && (1..=31).contains(&day)).then_some((month, day))
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(CalendarExtraction::new(params)?))
}

impl Module for CalendarExtraction {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        let index = x.index().clone();
        let n = index.len();
        let mut year = Vec::with_capacity(n);
        let mut month = Vec::with_capacity(n);
        let mut day = Vec::with_capacity(n);
        let mut weekday = Vec::with_capacity(n);
        let mut hour = Vec::with_capacity(n);
        let mut is_weekend = Vec::with_capacity(n);
        let mut is_holiday = Vec::with_capacity(n);

        for ts in index.iter() {
            let dt = DateTime::<Utc>::from_timestamp(ts, 0).ok_or_else(|| Error::SchemaMismatch {
                message: format!("timestamp {ts} is outside the supported calendar range"),
            })?;
            year.push(f64::from(dt.year()));
            month.push(f64::from(dt.month()));
            day.push(f64::from(dt.day()));
            let wd = dt.weekday().num_days_from_monday();
            weekday.push(f64::from(wd));
            hour.push(f64::from(dt.hour()));
            is_weekend.push(if wd >= 5 { 1.0 } else { 0.0 });
            let holiday = self.holidays.contains(&(dt.month(), dt.day()));
            is_holiday.push(if holiday { 1.0 } else { 0.0 });
        }

        DataSet::from_arrays([
            TimeArray::series("year", index.clone(), year)?,
            TimeArray::series("month", index.clone(), month)?,
            TimeArray::series("day", index.clone(), day)?,
            TimeArray::series("weekday", index.clone(), weekday)?,
            TimeArray::series("hour", index.clone(), hour)?,
            TimeArray::series("is_weekend", index.clone(), is_weekend)?,
            TimeArray::series("is_holiday", index, is_holiday)?,
        ])
    }
}
