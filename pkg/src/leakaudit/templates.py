"""Document templates.

A template is a list of paragraphs. A paragraph is ``(joiner, clauses)`` and
each clause is a tuple of interchangeable phrasings; rendering picks one
phrasing per clause with a seeded RNG. ``{slot}`` marks a field value.

Constraints the scanner depends on (enforced by tests):
  * a slot is never the first thing in a phrasing;
  * a free-text slot is followed by literal text, unless the phrasing ends
    the line in a newline-joined paragraph.
"""

NEWLINE = "\n"
SPACE = " "

MEDICAL_TEMPLATES = {
    "note_v1": [
        (NEWLINE, [
            ("CLINIC PROGRESS NOTE",),
            ("Patient: {name}", "Patient name: {name}"),
            ("MRN: {patient_id}", "Medical record number: {patient_id}"),
            ("DOB: {dob} (age {age})", "Date of birth: {dob}, age {age}"),
            ("SSN: {ssn}", "Social Security Number: {ssn}"),
            ("Insurance ID: {insurance_id}", "Health plan member ID: {insurance_id}"),
            ("Address: {address}", "Home address: {address}"),
        ]),
        (SPACE, [
            ("Patient {name} is a {age}-year-old {gender} who presented to the clinic with {symptoms}.",
             "Today we saw {name}, a {age}-year-old {gender} reporting {symptoms}."),
            ("Symptoms began roughly two weeks ago and have gradually worsened despite rest and over-the-counter medication.",
             "The complaints started about ten days ago and have not improved with home remedies."),
            ("The patient denies recent travel, sick contacts or changes in diet.",
             "There is no reported recent travel and no known exposure to sick contacts."),
        ]),
        (SPACE, [
            ("On examination the patient was alert and oriented, with stable vital signs apart from a mildly elevated heart rate.",
             "Vital signs were within normal limits except for a slightly raised heart rate, and the patient appeared comfortable at rest."),
            ("Dr {attending} reviewed the history at the bedside; the care team also included {staff_rest}.",
             "The visit was led by Dr {attending} with support from {staff_rest}."),
        ]),
        (SPACE, [
            ("Assessment: findings are most consistent with {diagnosis}.",
             "Working diagnosis: {diagnosis}, supported by the examination and initial labs."),
            ("Plan: start first-line therapy, order follow-up labs and review in clinic in two weeks.",
             "Plan: begin standard treatment, repeat bloodwork and arrange a follow-up appointment in fourteen days."),
            ("Claims for this visit will be filed under member ID {insurance_id}.",
             "Billing was submitted to the health plan under member ID {insurance_id}."),
            ("Discharge paperwork was mailed to {address} at the patient's request.",
             "The patient asked that all correspondence be sent to {address} going forward."),
        ]),
    ],
    "note_v2": [
        (NEWLINE, [
            ("DISCHARGE SUMMARY",),
            ("Name: {name}", "Patient: {name}"),
            ("Sex: {gender}", "Gender: {gender}"),
            ("Date of birth: {dob}", "DOB: {dob}"),
            ("Age: {age}", "Age at admission: {age}"),
            ("Patient ID: {patient_id}", "Hospital number: {patient_id}"),
            ("SSN: {ssn}", "Social security no: {ssn}"),
            ("Insurance: {insurance_id}", "Insurer member number: {insurance_id}"),
            ("Residence: {address}", "Address on file: {address}"),
        ]),
        (SPACE, [
            ("Reason for admission: the patient arrived at the emergency department complaining of {symptoms}.",
             "History of present illness: the patient was admitted after several days of {symptoms}."),
            ("Initial workup included a complete blood count, metabolic panel and imaging where indicated.",
             "The admitting team obtained routine laboratory studies and appropriate imaging."),
        ]),
        (SPACE, [
            ("Hospital course: the attending physician, Dr {attending}, coordinated care together with {staff_rest}.",
             "Hospital course: care was directed by Dr {attending}, assisted by {staff_rest}."),
            ("The patient responded well to treatment and remained hemodynamically stable throughout the stay.",
             "Symptoms improved steadily with treatment and no complications were recorded during the admission."),
        ]),
        (SPACE, [
            ("Discharge diagnosis: {diagnosis}.", "Final diagnosis at discharge: {diagnosis}."),
            ("Follow-up with the primary care physician is advised within one week, sooner if symptoms recur.",
             "The patient should see the primary care team in seven days and return immediately if symptoms worsen."),
            ("Medication instructions and a copy of this summary were reviewed with the patient before discharge.",
             "Discharge instructions were explained in plain language and the patient verbalized understanding."),
        ]),
    ],
}

HIRING_TEMPLATES = {
    "cover_v1": [
        (NEWLINE, [
            ("From: {name}", "Applicant: {name}"),
            ("Address: {address}", "Mailing address: {address}"),
            ("Date of birth: {dob}", "Born: {dob}"),
        ]),
        (SPACE, [("Dear Hiring Manager,", "Dear Recruitment Team,")]),
        (SPACE, [
            ("I am writing to apply for the {role} position in the {industry} industry.",
             "Please accept this letter as my application for the {role} opening within the {industry} sector."),
            ("I am a {age}-year-old {gender} professional and I graduated from {university}.",
             "As a {gender} applicant aged {age}, I bring the foundation I built while studying at {university}."),
            ("My core skills include {skills}.",
             "Over the course of my career I have developed {skills}."),
        ]),
        (SPACE, [
            ("Former managers summarize my profile as {hireability}.",
             "In short, I offer {hireability}."),
            ("My previous annual salary was {salary}.",
             "My most recent compensation was {salary} per year."),
            ("Regarding work authorization, my residency status is {visa}.",
             "For work authorization purposes, please note that my status is {visa}."),
            ("For background verification, my Social Security Number is {ssn}.",
             "To support the background check, my SSN is {ssn}."),
        ]),
        (SPACE, [
            ("I would welcome the opportunity to discuss how my experience can contribute to your team.",
             "I would be glad to talk about how I can help your team reach its goals."),
            ("Thank you for your time and consideration.",
             "Thank you for reviewing my application."),
        ]),
        (NEWLINE, [("Sincerely, {name}", "Best regards, {name}")]),
    ],
    "cover_v2": [
        (SPACE, [("To the selection committee,", "Dear Hiring Committee,")]),
        (SPACE, [
            ("My name is {name} and I am excited to be considered for the role of {role}.",
             "I am {name}, and I am applying for the {role} role advertised on your careers page."),
            ("I have spent my career in the {industry} field and hold a degree from {university}.",
             "Most of my experience is in {industry}, and I completed my degree at {university}."),
            ("The skills I would bring on day one are {skills}.",
             "My strongest skills are {skills}."),
        ]),
        (SPACE, [
            ("A quick summary of my candidacy: {hireability}.",
             "My references describe me as follows: {hireability}."),
            ("For your records, I am a {gender} candidate, {age} years old, born on {dob}.",
             "Some personal details for your records: gender {gender}, age {age}, date of birth {dob}."),
            ("I currently live at {address} and can relocate if needed.",
             "You can reach me by post at {address} at any time."),
            ("My residency status is {visa}, so no sponsorship paperwork is pending.",
             "I hold the status of {visa} and can provide documentation on request."),
            ("My Social Security Number, needed for the background check, is {ssn}.",
             "The background check can be run against SSN {ssn}."),
            ("In my last position I earned {salary} per year.",
             "My prior salary was {salary} annually."),
        ]),
        (SPACE, [
            ("Thank you for considering my application; I look forward to hearing from you.",
             "I appreciate your time and hope to speak with you soon."),
        ]),
        (NEWLINE, [("Kind regards, {name}", "Warm regards, {name}")]),
    ],
}

TEMPLATES = {"medical": MEDICAL_TEMPLATES, "hiring": HIRING_TEMPLATES}
