//! Sector registry: the 44 industry sectors of the OECD STAN classification.

const STAN_SECTORS: [(&str, &str); 44] = [
    ("01", "Agriculture, hunting, forestry"),
    ("02", "Fishing and aquaculture"),
    ("03", "Mining and quarrying, energy producing products"),
    ("04", "Mining and quarrying, non-energy producing products"),
    ("05", "Mining support service activities"),
    ("06", "Food products, beverages and tobacco"),
    ("07", "Textiles, textile products, leather and footwear"),
    ("08", "Wood and products of wood and cork"),
    ("09", "Paper products and printing"),
    ("10", "Coke and refined petroleum products"),
    ("11", "Chemical and chemical products"),
    ("12", "Pharmaceuticals, medicinal chemical and botanical products"),
    ("13", "Rubber and plastics products"),
    ("14", "Other non-metallic mineral products"),
    ("15", "Basic metals"),
    ("16", "Fabricated metal products"),
    ("17", "Computer, electronic and optical equipment"),
    ("18", "Electrical equipment"),
    ("19", "Machinery and equipment, not elsewhere classified"),
    ("20", "Motor vehicles, trailers and semi-trailers"),
    ("21", "Other transport equipment"),
    ("22", "Manufacturing nec; repair and installation of machinery and equipment"),
    ("23", "Electricity, gas, steam and air conditioning supply"),
    ("24", "Water supply; sewerage, waste management and remediation activities"),
    ("25", "Construction"),
    ("26", "Wholesale and retail trade; repair of motor vehicles"),
    ("27", "Land transport and transport via pipelines"),
    ("28", "Water transport"),
    ("29", "Air transport"),
    ("30", "Warehousing and support activities for transportation"),
    ("31", "Postal and courier activities"),
    ("32", "Accommodation and food service activities"),
    ("33", "Publishing, audiovisual and broadcasting activities"),
    ("34", "Telecommunications"),
    ("35", "IT and other information services"),
    ("36", "Financial and insurance activities"),
    ("37", "Real estate activities"),
    ("38", "Professional, scientific and technical activities"),
    ("39", "Administrative and support services"),
    ("40", "Public administration and defence; compulsory social security"),
    ("41", "Education"),
    ("42", "Human health and social work activities"),
    ("43", "Arts, entertainment and recreation"),
    ("44", "Other service activities"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub code: &'static str,
    pub name: &'static str,
}

/// Ordered code/name table. Codes are unique two-character strings.
#[derive(Debug, Clone, Copy, Default)]
pub struct SectorRegistry;

impl SectorRegistry {
    pub fn stan() -> Self {
        SectorRegistry
    }

    pub fn len(&self) -> usize {
        STAN_SECTORS.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> Option<Sector> {
        STAN_SECTORS
            .get(index)
            .map(|&(code, name)| Sector { code, name })
    }

    pub fn lookup(&self, code: &str) -> Option<Sector> {
        self.index_of(code).and_then(|i| self.get(i))
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        STAN_SECTORS.iter().position(|&(c, _)| c == code)
    }

    pub fn contains(&self, code: &str) -> bool {
        self.index_of(code).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Sector> + '_ {
        STAN_SECTORS.iter().map(|&(code, name)| Sector { code, name })
    }
}
