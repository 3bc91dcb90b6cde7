"""Curated value pools for synthetic identities.

Given-name pools and the family-name pool share no tokens, so a name cell can
always be attributed to a given or a family name unambiguously. No value in
any pool contains a period, a pipe or a newline; the document scanner and the
table writer rely on that.
"""

MALE_GIVEN = (
    "James", "Robert", "Michael", "William", "David", "Richard", "Joseph",
    "Thomas", "Charles", "Daniel", "Matthew", "Anthony", "Mark", "Steven",
    "Paul", "Andrew", "Joshua", "Kevin", "Brian", "George", "Edward",
    "Ronald", "Timothy", "Jason", "Ryan", "Jacob", "Gary", "Nicholas",
    "Eric", "Jonathan", "Stephen", "Larry",
)

FEMALE_GIVEN = (
    "Mary", "Patricia", "Jennifer", "Linda", "Elizabeth", "Barbara", "Susan",
    "Jessica", "Sarah", "Karen", "Nancy", "Lisa", "Betty", "Margaret",
    "Sandra", "Ashley", "Kimberly", "Emily", "Donna", "Michelle", "Carol",
    "Amanda", "Melissa", "Deborah", "Stephanie", "Rebecca", "Sharon",
    "Laura", "Cynthia", "Kathleen", "Amy", "Angela",
)

NEUTRAL_GIVEN = (
    "Alex", "Jordan", "Taylor", "Casey", "Riley", "Morgan", "Avery", "Quinn",
    "Rowan", "Sage", "Jamie", "Skyler", "Emerson", "Finley", "Dakota",
    "Reese", "Peyton", "Remy", "Hayden", "Kendall", "Ari", "Blake",
    "Charlie", "Devon", "Elliot", "Frankie", "Jules", "Kai", "Lennox",
    "Marlowe", "Oakley", "Tatum",
)

FAMILY = (
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller",
    "Davis", "Rodriguez", "Martinez", "Hernandez", "Lopez", "Gonzalez",
    "Wilson", "Anderson", "Moore", "Jackson", "Martin", "Lee", "Perez",
    "Thompson", "White", "Harris", "Sanchez", "Clark", "Ramirez", "Lewis",
    "Robinson", "Walker", "Young", "Allen", "King", "Wright", "Scott",
    "Torres", "Nguyen", "Hill", "Flores", "Green", "Adams", "Nelson",
    "Baker", "Hall", "Rivera", "Campbell", "Mitchell", "Carter", "Roberts",
    "Phillips", "Evans", "Turner", "Diaz", "Parker", "Cruz", "Edwards",
    "Collins", "Reyes", "Stewart", "Morris", "Murphy", "Cook", "Rogers",
    "Okafor", "Patel", "Kowalski", "Schmidt", "Yamamoto", "Chen",
)

STREET_NAMES = (
    "Oak", "Maple", "Pine", "Cedar", "Elm", "Washington", "Lake", "Hill",
    "Park", "Sunset", "Highland", "Riverside", "Willow", "Chestnut",
    "Franklin", "Jefferson", "Lincoln", "Meadow", "Spring", "Birch",
)

STREET_TYPES = ("St", "Ave", "Rd", "Blvd", "Ln", "Dr", "Ct", "Way")

CITIES = (
    "Springfield", "Riverton", "Fairview", "Greenville", "Madison",
    "Clinton", "Georgetown", "Salem", "Ashland", "Dover", "Milford",
    "Oxford", "Burlington", "Lexington", "Newport", "Bristol", "Franklin",
    "Arlington", "Hudson", "Kingston",
)

STATES = (
    "Alabama", "Arizona", "California", "Colorado", "Connecticut", "Florida",
    "Georgia", "Illinois", "Indiana", "Iowa", "Kentucky", "Maryland",
    "Michigan", "Minnesota", "Missouri", "Nevada", "New Jersey", "New York",
    "North Carolina", "Ohio", "Oregon", "Pennsylvania", "Tennessee", "Texas",
    "Utah", "Virginia", "Washington", "Wisconsin",
)

COUNTRY = "USA"

# (diagnosis, presenting symptoms)
CONDITIONS = (
    ("community-acquired pneumonia", "productive cough, fever and shortness of breath"),
    ("type 2 diabetes mellitus", "increased thirst, frequent urination and fatigue"),
    ("acute appendicitis", "right lower quadrant pain, nausea and low-grade fever"),
    ("migraine without aura", "throbbing unilateral headache, photophobia and nausea"),
    ("essential hypertension", "morning headaches, dizziness and blurred vision"),
    ("iron deficiency anemia", "fatigue, pallor and exertional dyspnea"),
    ("acute bronchitis", "persistent dry cough, chest tightness and mild wheezing"),
    ("urinary tract infection", "dysuria, urinary urgency and suprapubic discomfort"),
    ("gastroesophageal reflux disease", "retrosternal burning after meals and regurgitation"),
    ("hypothyroidism", "weight gain, cold intolerance and constipation"),
    ("lumbar strain", "low back pain radiating to the buttock and stiffness"),
    ("atrial fibrillation", "palpitations, lightheadedness and irregular pulse"),
    ("major depressive disorder", "low mood, insomnia and loss of interest"),
    ("asthma exacerbation", "wheezing, nocturnal cough and chest tightness"),
    ("cellulitis of the left leg", "warmth, redness and swelling of the lower leg"),
    ("kidney stones", "colicky flank pain, hematuria and vomiting"),
)

# (role, industry, skills)
ROLES = (
    ("Software Engineer", "Technology", "Python, distributed systems, code review and cloud deployment"),
    ("Data Analyst", "Finance", "SQL, statistical modeling, dashboarding and Excel automation"),
    ("Registered Nurse", "Healthcare", "patient assessment, medication administration and triage"),
    ("Marketing Manager", "Retail", "campaign planning, market research and brand strategy"),
    ("Mechanical Engineer", "Manufacturing", "CAD design, finite element analysis and prototyping"),
    ("Financial Analyst", "Banking", "financial modeling, forecasting and risk assessment"),
    ("High School Teacher", "Education", "curriculum design, classroom management and mentoring"),
    ("Product Manager", "Technology", "roadmap planning, user research and stakeholder alignment"),
    ("Accountant", "Accounting", "bookkeeping, tax preparation and audit support"),
    ("Supply Chain Coordinator", "Logistics", "inventory planning, vendor management and ERP systems"),
    ("Graphic Designer", "Media", "typography, Adobe Creative Suite and visual storytelling"),
    ("Civil Engineer", "Construction", "structural analysis, site supervision and AutoCAD"),
    ("Sales Representative", "Pharmaceuticals", "territory management, negotiation and CRM tools"),
    ("Human Resources Specialist", "Consulting", "recruiting, onboarding and employee relations"),
    ("Research Scientist", "Biotechnology", "assay development, data analysis and scientific writing"),
    ("Customer Success Manager", "Software", "account management, onboarding and renewals strategy"),
)

HIREABILITY_TRAITS = (
    "strong fit for senior roles with proven leadership",
    "reliable contributor who ramps up quickly on new teams",
    "excellent communicator with a record of cross-team delivery",
    "detail oriented and ready to start within two weeks",
    "consistently exceeds targets and mentors junior colleagues",
    "adaptable generalist suited to fast-paced environments",
    "solid technical depth but limited management experience",
    "highly recommended by previous supervisors",
)

IVY_LEAGUE = (
    "Brown University", "Columbia University", "Cornell University",
    "Dartmouth College", "Harvard University", "Princeton University",
    "University of Pennsylvania", "Yale University",
)

NON_IVY = (
    "Stanford University", "University of Michigan", "Ohio State University",
    "Arizona State University", "University of Texas at Austin",
    "Georgia Institute of Technology", "Purdue University",
    "University of Washington", "Rutgers University", "University of Florida",
    "Boston University", "Northeastern University",
    "University of Wisconsin-Madison", "Penn State University",
    "University of Minnesota", "Texas A&M University",
)
